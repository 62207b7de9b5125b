"""Labeled document-term matrices and TF-IDF weighting.

Rows are chapter-documents in corpus order, columns are vocabulary terms in
lexicographic order, entries are occurrence counts. Weighting: per-row term
frequency normalized by the row maximum, times a global log inverse document
frequency (natural log of n_docs / doc_frequency).
"""

from __future__ import annotations

import csv
import warnings
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import io as spio
from scipy import sparse

from .atomic import atomic_path, write_text
from .errors import AllDocumentsEmpty, UnknownBook, ZeroRow
from .ingest import BookLabel, Corpus
from .preprocess import PreprocessConfig, pipeline


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "index", {t: j for j, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    @classmethod
    def from_terms(cls, terms) -> "Vocabulary":
        return cls(tuple(sorted(set(terms))))


RowLabel = tuple[BookLabel, int]  # (book, chapter_index)


@dataclass(frozen=True)
class DocTermMatrix:
    counts: sparse.csr_matrix  # n x p, int64, stored entries > 0
    rows: tuple[RowLabel, ...]
    vocab: Vocabulary

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    @property
    def books(self) -> tuple[BookLabel, ...]:
        seen: dict[int, BookLabel] = {}
        for book, _ in self.rows:
            seen.setdefault(book.id, book)
        return tuple(seen[i] for i in sorted(seen))

    def book_ids(self) -> np.ndarray:
        return np.array([book.id for book, _ in self.rows], dtype=np.int64)

    def dense(self) -> np.ndarray:
        return np.asarray(self.counts.todense(), dtype=np.float64)

    @classmethod
    def from_dense(cls, counts, rows, terms) -> "DocTermMatrix":
        mat = sparse.csr_matrix(np.asarray(counts, dtype=np.int64))
        mat.sort_indices()
        mat.eliminate_zeros()
        return cls(mat, tuple(rows), Vocabulary(tuple(terms)))


@dataclass(frozen=True)
class WeightMatrix:
    weights: sparse.csr_matrix  # n x p, float64, same rows/vocab as source
    rows: tuple[RowLabel, ...]
    vocab: Vocabulary

    @property
    def shape(self) -> tuple[int, int]:
        return self.weights.shape

    def dense(self) -> np.ndarray:
        return np.asarray(self.weights.todense(), dtype=np.float64)


def build_dtm(corpus: Corpus, config: PreprocessConfig) -> DocTermMatrix:
    """Count matrix over the preprocessed corpus.

    Documents emptied by preprocessing are pruned (with a warning) so no
    all-zero row exists; raises AllDocumentsEmpty if nothing survives.
    """
    doc_counts: list[Counter] = []
    rows: list[RowLabel] = []
    dropped = []
    for doc in corpus.documents:
        tokens = pipeline(doc, config)
        if tokens:
            doc_counts.append(Counter(tokens))
            rows.append((doc.book, doc.chapter_index))
        else:
            dropped.append((doc.book.name, doc.chapter_index))
    if not rows:
        raise AllDocumentsEmpty("preprocessing removed every token of every document")
    if dropped:
        warnings.warn(f"dropped {len(dropped)} empty document(s): {dropped[:5]}")

    vocab = Vocabulary.from_terms(t for c in doc_counts for t in c)
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    for c in doc_counts:
        for term in sorted(c):
            indices.append(vocab.index[term])
            data.append(c[term])
        indptr.append(len(indices))
    counts = sparse.csr_matrix(
        (np.array(data, dtype=np.int64), np.array(indices, dtype=np.int32), np.array(indptr)),
        shape=(len(rows), len(vocab)),
    )
    return DocTermMatrix(counts, tuple(rows), vocab)


def slice_book(dtm: DocTermMatrix, book) -> DocTermMatrix:
    """Per-book matrix: that book's rows, columns pruned to its own terms."""
    if isinstance(book, BookLabel):
        book_id = book.id
    elif isinstance(book, str):
        by_name = {b.name: b.id for b in dtm.books}
        if book not in by_name:
            raise UnknownBook(book)
        book_id = by_name[book]
    else:
        book_id = int(book)
    mask = np.array([b.id == book_id for b, _ in dtm.rows])
    if not mask.any():
        raise UnknownBook(f"book id {book_id} has no rows")
    sub = dtm.counts[mask]
    keep = np.flatnonzero(np.asarray(sub.sum(axis=0)).ravel() > 0)
    sub = sub[:, keep].tocsr()
    sub.sort_indices()
    terms = tuple(dtm.vocab.terms[j] for j in keep)
    rows = tuple(r for r, m in zip(dtm.rows, mask) if m)
    return DocTermMatrix(sub, rows, Vocabulary(terms))


def tf(counts_row) -> np.ndarray:
    """Term frequency of one row: counts divided by the row maximum."""
    row = np.asarray(counts_row, dtype=np.float64).ravel()
    top = row.max(initial=0.0)
    if top <= 0:
        raise ZeroRow("row has no nonzero entry")
    return row / top


def idf(dtm: DocTermMatrix) -> np.ndarray:
    """log(n_docs / doc_frequency) per vocabulary term (natural log)."""
    m = dtm.shape[0]
    m_j = dtm.counts.getnnz(axis=0).astype(np.float64)
    return np.log(m / m_j)


def tfidf(dtm: DocTermMatrix) -> WeightMatrix:
    """Element-wise product of per-row tf and global idf."""
    weights = dtm.counts.astype(np.float64).tocsr()
    if weights.nnz:
        row_max = np.maximum.reduceat(weights.data, weights.indptr[:-1])
        lengths = np.diff(weights.indptr)
        if (lengths == 0).any():
            raise ZeroRow("matrix has an all-zero row")
        weights.data /= np.repeat(row_max, lengths)
        weights.data *= idf(dtm)[weights.indices]
        weights.eliminate_zeros()
    return WeightMatrix(weights, dtm.rows, dtm.vocab)


# --- persistence: MatrixMarket + sidecars -------------------------------

def _write_rows_csv(rows, path: Path) -> None:
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["book_id", "chapter_index"])
        for book, chapter in rows:
            writer.writerow([book.id, chapter])


def _write_books_csv(rows, path: Path) -> None:
    seen: dict[int, str] = {}
    for book, _ in rows:
        seen.setdefault(book.id, book.name)
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["book_id", "name"])
        for book_id in sorted(seen):
            writer.writerow([book_id, seen[book_id]])


def _read_sidecars(prefix: Path) -> tuple[tuple[RowLabel, ...], Vocabulary]:
    with open(prefix.with_suffix(".books.csv"), newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        names = {int(book_id): name for book_id, name in reader}
    with open(prefix.with_suffix(".rows.csv"), newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        rows = tuple(
            (BookLabel(int(book_id), names[int(book_id)]), int(chapter))
            for book_id, chapter in reader
        )
    terms = prefix.with_suffix(".vocab.txt").read_text("utf-8").splitlines()
    return rows, Vocabulary(tuple(terms))


def _save_matrix(matrix, rows, vocab, prefix: Path, field: str) -> None:
    prefix.parent.mkdir(parents=True, exist_ok=True)
    mat = matrix.tocoo()
    with atomic_path(prefix.with_suffix(".mtx")) as tmp:
        # temp name must keep the .mtx suffix or mmwrite appends its own;
        # 17 significant digits: exact float64 round-trip
        tmp_mtx = tmp.with_suffix(".mtx")
        spio.mmwrite(str(tmp_mtx), mat, field=field, precision=17)
        tmp_mtx.replace(tmp)
    _write_rows_csv(rows, prefix.with_suffix(".rows.csv"))
    _write_books_csv(rows, prefix.with_suffix(".books.csv"))
    write_text(
        prefix.with_suffix(".vocab.txt"),
        "\n".join(vocab.terms) + ("\n" if vocab.terms else ""),
    )


def save_dtm(dtm: DocTermMatrix, prefix: str | Path) -> None:
    """Write <prefix>.mtx plus .rows.csv, .books.csv and .vocab.txt sidecars."""
    _save_matrix(dtm.counts, dtm.rows, dtm.vocab, Path(prefix), "integer")


def load_dtm(prefix: str | Path) -> DocTermMatrix:
    prefix = Path(prefix)
    counts = sparse.csr_matrix(spio.mmread(str(prefix.with_suffix(".mtx"))), dtype=np.int64)
    counts.sort_indices()
    rows, vocab = _read_sidecars(prefix)
    return DocTermMatrix(counts, rows, vocab)


def save_weights(wm: WeightMatrix, prefix: str | Path) -> None:
    _save_matrix(wm.weights, wm.rows, wm.vocab, Path(prefix), "real")


def load_weights(prefix: str | Path) -> WeightMatrix:
    prefix = Path(prefix)
    weights = sparse.csr_matrix(spio.mmread(str(prefix.with_suffix(".mtx"))), dtype=np.float64)
    weights.sort_indices()
    rows, vocab = _read_sidecars(prefix)
    return WeightMatrix(weights, rows, vocab)
