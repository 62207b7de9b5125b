"""Corpus loading: manifest parsing, chapter segmentation, cache round-trip.

A corpus is described by a manifest file rather than hardcoded paths. One
stanza per book:

    [book]
    name = Quran
    path = quran-en.txt
    chapter_rule = regex:^SURAH \\d+$

`chapter_rule` is either ``per_file`` (path is a directory, one chapter per
file, filename order) or ``regex:<pattern>`` (path is a file, chapters are
delimited by header lines matching the pattern; headers are treated as
metadata and removed from chapter bodies).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from .atomic import write_text as _atomic_write_text
from .errors import (
    ConfigError,
    EmptyBook,
    EmptyChapter,
    EncodingError,
    MissingFile,
    NoChaptersFound,
)


class BookLabel(NamedTuple):
    id: int
    name: str


class RawDocument(NamedTuple):
    book: BookLabel
    chapter_index: int  # 1-based within the book
    text: str


@dataclass(frozen=True)
class ChapterRule:
    kind: str  # "per_file" | "regex"
    pattern: str | None = None

    @classmethod
    def parse(cls, spec: str) -> "ChapterRule":
        spec = spec.strip()
        if spec == "per_file":
            return cls("per_file")
        if spec.startswith("regex:"):
            pattern = spec[len("regex:") :]
            try:
                re.compile(pattern)
            except re.error as exc:
                raise ConfigError(f"bad chapter regex {pattern!r}: {exc}") from exc
            return cls("regex", pattern)
        raise ConfigError(f"unknown chapter_rule {spec!r}")


class ManifestEntry(NamedTuple):
    name: str
    path: str
    rule: ChapterRule


@dataclass(frozen=True)
class Corpus:
    documents: tuple[RawDocument, ...]  # book-major, chapter-ascending
    books: tuple[BookLabel, ...]

    @property
    def n(self) -> int:
        return len(self.documents)

    def book_sizes(self) -> dict[int, int]:
        sizes: dict[int, int] = {b.id: 0 for b in self.books}
        for doc in self.documents:
            sizes[doc.book.id] += 1
        return sizes

    def labels(self) -> list[tuple[int, int]]:
        """(book_id, chapter_index) per document, in row order."""
        return [(d.book.id, d.chapter_index) for d in self.documents]


def parse_manifest(path: str | Path) -> list[ManifestEntry]:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"manifest not found: {path}")
    entries: list[ManifestEntry] = []
    current: dict[str, str] | None = None

    def flush() -> None:
        nonlocal current
        if current is None:
            return
        missing = {"name", "path", "chapter_rule"} - set(current)
        if missing:
            raise ConfigError(f"manifest entry missing keys: {sorted(missing)}")
        entries.append(
            ManifestEntry(current["name"], current["path"], ChapterRule.parse(current["chapter_rule"]))
        )
        current = None

    for lineno, raw in enumerate(path.read_text("utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[book]":
            flush()
            current = {}
            continue
        if "=" not in line or current is None:
            raise ConfigError(f"{path}:{lineno}: expected '[book]' or 'key = value'")
        key, _, value = line.partition("=")
        current[key.strip()] = value.strip()
    flush()

    if not entries:
        raise ConfigError(f"manifest lists no books: {path}")
    names = [e.name for e in entries]
    if len(set(names)) != len(names):
        raise ConfigError("duplicate book names in manifest")
    if any(not n for n in names):
        raise ConfigError("empty book name in manifest")
    return entries


def split_chapter_spans(text: str, pattern: str) -> tuple[str, list[tuple[str, str]]]:
    """Exact decomposition: (prelude, [(header, body), ...]).

    ``prelude + "".join(h + b for h, b in parts)`` reproduces the input
    byte-for-byte; bodies here are unstripped.
    """
    matches = list(re.finditer(pattern, text, re.MULTILINE))
    if not matches:
        raise NoChaptersFound(f"chapter pattern {pattern!r} never matches")
    prelude = text[: matches[0].start()]
    parts = []
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        parts.append((m.group(0), text[m.end() : end]))
    return prelude, parts


def split_chapters(text: str, rule: ChapterRule) -> list[str]:
    """Ordered nonempty chapter bodies (whitespace-trimmed)."""
    if rule.kind == "per_file":
        body = text.strip()
        if not body:
            raise EmptyChapter("chapter text is empty")
        return [body]
    _, parts = split_chapter_spans(text, rule.pattern or "")
    chapters = []
    for index, (header, body) in enumerate(parts, 1):
        body = body.strip()
        if not body:
            raise EmptyChapter(f"chapter {index} ({header.strip()!r}) is empty")
        chapters.append(body)
    return chapters


def _read_text(path: Path) -> str:
    try:
        data = path.read_bytes()
    except FileNotFoundError as exc:
        raise MissingFile(str(path)) from exc
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path}: not valid UTF-8 ({exc})") from exc


def _book_chapters(root: Path, entry: ManifestEntry) -> list[str]:
    path = root / entry.path
    if entry.rule.kind == "per_file":
        if not path.is_dir():
            raise MissingFile(f"{path} (expected a directory for per_file rule)")
        files = sorted(p for p in path.iterdir() if p.is_file() and not p.name.startswith("."))
        chapters = []
        for f in files:
            body = _read_text(f).strip()
            if not body:
                raise EmptyChapter(f"{f}: chapter file is empty")
            chapters.append(body)
    else:
        if not path.is_file():
            raise MissingFile(str(path))
        chapters = split_chapters(_read_text(path), entry.rule)
    if not chapters:
        raise EmptyBook(f"book {entry.name!r} yields no chapters")
    return chapters


def load_corpus(root: str | Path, manifest: list[ManifestEntry] | str | Path) -> Corpus:
    """Load every book of a manifest into a single labeled corpus.

    Books are numbered 0..B-1 in manifest order; relative book paths are
    resolved against ``root``.
    """
    root = Path(root)
    if not root.is_dir():
        raise MissingFile(f"corpus root not found: {root}")
    if not isinstance(manifest, list):
        manifest = parse_manifest(manifest)

    documents: list[RawDocument] = []
    books: list[BookLabel] = []
    for book_id, entry in enumerate(manifest):
        label = BookLabel(book_id, entry.name)
        books.append(label)
        for index, chapter in enumerate(_book_chapters(root, entry), 1):
            documents.append(RawDocument(label, index, chapter))
    return Corpus(tuple(documents), tuple(books))


# --- cache (newline-delimited records, tab-separated, escaped text) ---

_ESCAPES = {"\\": "\\\\", "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def _escape(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


def _unescape(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            out.append({"\\": "\\", "n": "\n", "t": "\t", "r": "\r"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def save_cache(corpus: Corpus, path: str | Path) -> None:
    lines = ["#scriptmine-corpus\tv1"]
    for book in corpus.books:
        lines.append(f"#book\t{book.id}\t{_escape(book.name)}")
    for doc in corpus.documents:
        lines.append(f"{doc.book.id}\t{doc.chapter_index}\t{_escape(doc.text)}")
    _atomic_write_text(path, "\n".join(lines) + "\n")


def load_cache(path: str | Path) -> Corpus:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(str(path))
    books: dict[int, BookLabel] = {}
    documents: list[RawDocument] = []
    for line in _read_text(path).splitlines():
        if not line:
            continue
        if line.startswith("#"):
            fields = line.split("\t")
            if fields[0] == "#book":
                book_id = int(fields[1])
                books[book_id] = BookLabel(book_id, _unescape(fields[2]))
            continue
        book_id_s, index_s, text = line.split("\t", 2)
        documents.append(RawDocument(books[int(book_id_s)], int(index_s), _unescape(text)))
    return Corpus(tuple(documents), tuple(sorted(books.values())))
