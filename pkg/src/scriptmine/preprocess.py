"""Text cleaning: tokenization, stopword/noise removal, stemming, reports.

The chapter pipeline is tokenize -> lowercase -> remove_noise -> stem, with
the noise filter re-applied to the stems so that running the pipeline on its
own (space-joined) output reproduces it exactly.
"""

from __future__ import annotations

import csv
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple

from .atomic import atomic_path
from .errors import EmptyInput, InvalidHyperparameter
from .stemmer import stem

# alphabetic runs, apostrophes allowed internally ("god's" stays one token)
_WORD_RE = re.compile(r"[^\W\d_]+(?:['’][^\W\d_]+)*")
_SENT_RE = re.compile(r"[.!?]+(?=\s)")

# words before a period that do not end a sentence
_ABBREVIATIONS = frozenset(
    {"mr.", "mrs.", "ms.", "dr.", "st.", "no.", "vs.", "etc.", "e.g.", "i.e.", "cf."}
)

TAGSET = frozenset(
    {"CC", "CD", "DT", "IN", "MD", "NN", "NNS", "PRP", "PRP$", "RB", "VBD", "VBG"}
)

_LEXICON = {}
for _tag, _words in {
    "MD": "can could may might must ought shall shalt should will wilt would",
    "DT": "a an another any each either every neither no some that the this",
    "PRP": (
        "he her him himself herself i it itself me myself ourselves she thee "
        "them themselves they thou us we ye you yourself yourselves"
    ),
    "PRP$": "hers his its mine my our ours their theirs thine thy your yours",
    "IN": (
        "about after against among at before behind below beneath beside "
        "between by during for from in into of on over through under unto "
        "upon with within without"
    ),
    "CC": "and but nor or yet",
    "CD": "one two three four five six seven eight nine ten hundred thousand",
    "VBD": (
        "arose ate bore began brought built came did drank drove fell felt "
        "found gave went got had heard held kept knew left made met paid ran "
        "rose said sat saw sent slew smote sought spake spoke stood took "
        "taught thought told was went were wrote"
    ),
}.items():
    for _w in _words.split():
        _LEXICON.setdefault(_w, _tag)


class PosTaggedToken(NamedTuple):
    token: str
    tag: str


class FrequencyReport(NamedTuple):
    entries: list[tuple[str, int, float]]
    total: int


@dataclass(frozen=True)
class PreprocessConfig:
    stopwords: frozenset[str] = field(default_factory=lambda: load_stopwords())
    remove_noise: bool = True
    stem: bool = True


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a stopword file (one token per line, '#' comments).

    Without a path, returns the bundled English list.
    """
    if path is None:
        text = resources.files("scriptmine.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return frozenset(words)


def tokenize_words(text: str) -> list[str]:
    """Lowercased maximal alphabetic runs, in original order."""
    return [m.group(0).lower().replace("’", "'") for m in _WORD_RE.finditer(text)]


def tokenize_sentences(text: str) -> list[str]:
    """Split on sentence-final . ! ? followed by whitespace.

    Terminators stay attached; a trailing fragment without one is returned
    as-is; abbreviations like "e.g." do not split.
    """
    sentences = []
    start = 0
    for m in _SENT_RE.finditer(text):
        candidate = text[start : m.end()].strip()
        last_word = candidate.rsplit(None, 1)[-1].lower() if candidate else ""
        if last_word in _ABBREVIATIONS:
            continue
        if candidate:
            sentences.append(candidate)
        start = m.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _is_noise(token: str, stopwords: frozenset[str]) -> bool:
    if token in stopwords:
        return True
    if all(not ch.isalnum() for ch in token):
        return True  # purely punctuation
    return token.isdigit()


def remove_noise(tokens: Iterable[str], stopwords: frozenset[str]) -> list[str]:
    """Drop stopwords, purely-punctuation and purely-digit tokens."""
    return [t for t in tokens if not _is_noise(t, stopwords)]


def stem_token(token: str) -> str:
    """Stem one token to a fixpoint; possessive clitics are stripped first.

    "god's" -> "god"; other internal apostrophes are deleted before
    stemming so the stemmer always sees an alphabetic string. The stemmer
    is re-applied until the token is stable ("abuses" -> "abus" -> "abu"),
    which makes the whole pipeline idempotent.
    """
    if "'" in token:
        head, _, tail = token.rpartition("'")
        token = head if tail in ("s", "") else token
        token = token.replace("'", "")
    while token:
        stemmed = stem(token)
        if stemmed == token:
            break
        token = stemmed
    return token


def pos_tag(tokens: Iterable[str]) -> list[PosTaggedToken]:
    """Heuristic tagging: closed-class lexicon, then suffix rules, else NN."""
    tagged = []
    for token in tokens:
        tag = _LEXICON.get(token)
        if tag is None:
            if token.isdigit():
                tag = "CD"
            elif token.endswith("ed") and len(token) > 3:
                tag = "VBD"
            elif token.endswith("ing") and len(token) > 4:
                tag = "VBG"
            elif token.endswith("ly") and len(token) > 3:
                tag = "RB"
            elif token.endswith("s") and not token.endswith("ss") and len(token) > 3:
                tag = "NNS"
            else:
                tag = "NN"
        tagged.append(PosTaggedToken(token, tag))
    return tagged


def pos_counts(tagged: Iterable[PosTaggedToken]) -> list[tuple[str, int]]:
    counts = Counter(t.tag for t in tagged)
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def frequency_report(tokens: list[str], top_k: int) -> FrequencyReport:
    """Top-k tokens by count, ties broken lexicographically."""
    if top_k < 1:
        raise InvalidHyperparameter(f"top_k must be >= 1, got {top_k}")
    if not tokens:
        raise EmptyInput("no tokens to count")
    total = len(tokens)
    counts = Counter(tokens)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]
    return FrequencyReport([(t, c, c / total) for t, c in ranked], total)


def pipeline_text(text: str, config: PreprocessConfig) -> list[str]:
    """Full cleaning pipeline over raw text."""
    tokens = tokenize_words(text)
    if config.remove_noise:
        tokens = remove_noise(tokens, config.stopwords)
    if config.stem:
        tokens = [s for s in (stem_token(t) for t in tokens) if s]
        if config.remove_noise:
            tokens = remove_noise(tokens, config.stopwords)
    return tokens


def pipeline(doc, config: PreprocessConfig) -> list[str]:
    """Clean one document (anything with a .text attribute, or a string)."""
    text = doc if isinstance(doc, str) else doc.text
    return pipeline_text(text, config)


def write_frequency_csv(report: FrequencyReport, path: str | Path) -> None:
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["token", "count", "ratio"])
        for token, count, ratio in report.entries:
            writer.writerow([token, count, repr(ratio)])


def write_pos_csv(counts: list[tuple[str, int]], path: str | Path) -> None:
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tag", "count"])
        writer.writerows(counts)
