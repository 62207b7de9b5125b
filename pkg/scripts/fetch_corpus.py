#!/usr/bin/env python3
"""Build the nine-book corpus under data/corpus/ (network required).

Downloads public-domain translations, strips site boilerplate, normalizes
chapter headers to "CHAPTER n" (the Quran keeps "SURAH n") and writes
data/corpus/manifest.txt. Every book is verified against an expected chapter
count and the script fails loudly when a source layout changed; pass
--source name=PATH_OR_URL to substitute your own copy of a text.

The paper's exact editions are unpublished, so any mainstream public-domain
translation is acceptable. For the Quran prefer an edition that renders the
deity name as "God" (Itani, Rodwell); editions keeping "Allah" change the
token frequency profile.
"""

from __future__ import annotations

import argparse
import re
import sys
import urllib.request
from dataclasses import dataclass
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DEST = ROOT / "data" / "corpus"


@dataclass
class Source:
    name: str
    url: str
    kind: str  # tanzil | gutenberg | douay
    expected_chapters: int
    pattern: str | None = None  # chapter header regex for gutenberg kind
    book_header: str | None = None  # book name inside a multi-book file


SOURCES = [
    Source(
        "Quran",
        "https://tanzil.net/trans/?transID=en.itani&type=txt",
        "tanzil",
        114,
    ),
    Source(
        "Buddhism",
        "https://www.gutenberg.org/cache/epub/2017/pg2017.txt",
        "gutenberg",
        26,
        pattern=r"^Chapter\s+[IVXL]+\.",
    ),
    Source(
        "Tao-Te-Ching",
        "https://www.gutenberg.org/cache/epub/216/pg216.txt",
        "gutenberg",
        81,
        pattern=r"^\s*\d+\.\s+\d+\.",
    ),
    Source(
        "Upanishad",
        "https://www.gutenberg.org/cache/epub/3283/pg3283.txt",
        "gutenberg",
        15,
        pattern=r"^[IVXL]+\s+ADHY.YA",
    ),
    Source(
        "Yogasutra",
        "https://www.gutenberg.org/cache/epub/2526/pg2526.txt",
        "gutenberg",
        4,
        pattern=r"^Book\s+(First|Second|Third|Fourth)",
    ),
    Source("Book of Proverb", "DOUAY", "douay", 31, book_header="Proverbs"),
    Source("Book of Ecclesiasticus", "DOUAY", "douay", 51, book_header="Ecclesiasticus"),
    Source("Book of Ecclesiastes", "DOUAY", "douay", 12, book_header="Ecclesiastes"),
    Source("Book of Wisdom", "DOUAY", "douay", 19, book_header="Wisdom"),
]

DOUAY_URL = "https://www.gutenberg.org/cache/epub/1581/pg1581.txt"


def fetch(url_or_path: str) -> str:
    if not url_or_path.startswith(("http://", "https://")):
        return Path(url_or_path).read_text("utf-8")
    print(f"  downloading {url_or_path}")
    with urllib.request.urlopen(url_or_path, timeout=120) as resp:
        return resp.read().decode("utf-8", errors="replace")


def strip_gutenberg(text: str) -> str:
    start = re.search(r"\*\*\* ?START OF.*?\*\*\*", text)
    if start:
        text = text[start.end() :]
    end = re.search(r"\*\*\* ?END OF", text)
    if end:
        text = text[: end.start()]
    return text


def normalize_chapters(text: str, pattern: str, min_words: int = 20) -> list[str]:
    """Chapter bodies split on header lines; tiny front/TOC chunks dropped."""
    matches = list(re.finditer(pattern, text, re.MULTILINE))
    if not matches:
        raise SystemExit(f"chapter pattern {pattern!r} never matched; adjust SOURCES")
    chapters = []
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        body = text[m.end() : end].strip()
        if len(re.findall(r"[A-Za-z]+", body)) >= min_words:
            chapters.append(body)
    return chapters


def extract_douay_book(bible: str, book_header: str, expected: int) -> list[str]:
    # Douay-Rheims chapter headers look like "Proverbs Chapter 1"
    pattern = rf"^{book_header} Chapter (\d+)"
    matches = list(re.finditer(pattern, bible, re.MULTILINE))
    if len(matches) < expected:
        raise SystemExit(
            f"found {len(matches)} '{book_header} Chapter n' headers, expected {expected}"
        )
    chapters = []
    for i, m in enumerate(matches[:expected]):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(bible)
        chapters.append(bible[m.end() : end].strip())
    return chapters


def parse_tanzil(text: str) -> list[str]:
    """tanzil.net verse-per-line format: sura|aya|text."""
    chapters: dict[int, list[str]] = {}
    for line in text.splitlines():
        parts = line.split("|", 2)
        if len(parts) == 3 and parts[0].isdigit():
            chapters.setdefault(int(parts[0]), []).append(parts[2].strip())
    return ["\n".join(chapters[k]) for k in sorted(chapters)]


def write_book(name: str, chapters: list[str], header: str) -> str:
    slug = name.lower().replace(" ", "-")
    path = DEST / f"{slug}.txt"
    lines = []
    for i, body in enumerate(chapters, 1):
        lines.append(f"{header} {i}")
        lines.append(body)
        lines.append("")
    path.write_text("\n".join(lines), "utf-8")
    return f"{slug}.txt"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--source",
        action="append",
        default=[],
        metavar="NAME=PATH_OR_URL",
        help="override a text source (repeatable); NAME as in the manifest",
    )
    args = parser.parse_args()
    overrides = dict(item.split("=", 1) for item in args.source)

    DEST.mkdir(parents=True, exist_ok=True)
    manifest = ["# Nine-book corpus built by scripts/fetch_corpus.py"]
    douay_cache: str | None = None
    for src in SOURCES:
        print(f"{src.name}:")
        if src.kind == "douay":
            if douay_cache is None:
                douay_cache = strip_gutenberg(fetch(overrides.get("DOUAY", DOUAY_URL)))
            chapters = extract_douay_book(douay_cache, src.book_header, src.expected_chapters)
        else:
            raw = fetch(overrides.get(src.name, src.url))
            if src.kind == "tanzil":
                chapters = parse_tanzil(raw)
            else:
                chapters = normalize_chapters(strip_gutenberg(raw), src.pattern)
        if len(chapters) != src.expected_chapters:
            raise SystemExit(
                f"{src.name}: got {len(chapters)} chapters, expected "
                f"{src.expected_chapters}; fix the pattern or pass --source"
            )
        header = "SURAH" if src.name == "Quran" else "CHAPTER"
        filename = write_book(src.name, chapters, header)
        rule = rf"regex:^{header} \d+$"
        manifest += ["", "[book]", f"name = {src.name}", f"path = {filename}", f"chapter_rule = {rule}"]
        print(f"  {len(chapters)} chapters -> {filename}")

    (DEST / "manifest.txt").write_text("\n".join(manifest) + "\n", "utf-8")
    print(f"\nwrote {DEST / 'manifest.txt'}")
    print("verify with: scriptmine ingest --manifest data/corpus/manifest.txt")
    return 0


if __name__ == "__main__":
    sys.exit(main())
