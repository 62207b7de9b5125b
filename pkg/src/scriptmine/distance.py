"""Chapter and book distance analysis.

Four measures over document term vectors: euclidean, manhattan, generalized
jaccard (sum of minima over sum of maxima) and cosine. Book-level distances
aggregate the chapter-pair block with min / max / mean / median linkage.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .atomic import atomic_path
from .dtm import DocTermMatrix, WeightMatrix
from .errors import BothZero, DegenerateMeasure, LengthMismatch, ZeroVector
from .ingest import BookLabel

MEASURES = ("euclidean", "manhattan", "jaccard", "cosine")
LINKAGES = ("min", "max", "mean", "median")

_METRIC_CODE = {
    "euclidean": _kernels.EUCLIDEAN,
    "manhattan": _kernels.MANHATTAN,
    "jaccard": _kernels.JACCARD,
    "cosine": _kernels.COSINE,
}


def _check_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise LengthMismatch(f"vector lengths differ: {x.shape[0]} vs {y.shape[0]}")
    return x, y


def euclidean(x, y) -> float:
    x, y = _check_pair(x, y)
    return float(np.sqrt(((x - y) ** 2).sum()))


def manhattan(x, y) -> float:
    x, y = _check_pair(x, y)
    return float(np.abs(x - y).sum())


def jaccard_similarity(x, y) -> float:
    x, y = _check_pair(x, y)
    union = np.maximum(x, y).sum()
    if union == 0:
        raise BothZero("jaccard similarity undefined for two all-zero vectors")
    return float(np.minimum(x, y).sum() / union)


def jaccard_distance(x, y) -> float:
    return 1.0 - jaccard_similarity(x, y)


def cosine_similarity(x, y) -> float:
    x, y = _check_pair(x, y)
    nx = float(np.sqrt(x @ x))
    ny = float(np.sqrt(y @ y))
    if nx == 0 or ny == 0:
        raise ZeroVector("cosine similarity undefined for a zero vector")
    return float((x @ y) / (nx * ny))


def cosine_distance(x, y) -> float:
    # the source similarity formula is exposed above; distance is 1 - sim
    return 1.0 - cosine_similarity(x, y)


@dataclass(frozen=True)
class DistanceMatrix:
    values: np.ndarray  # n x n, symmetric, zero diagonal
    labels: tuple  # (BookLabel, chapter_index) per row
    measure: str

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class BookDistanceMatrix:
    values: np.ndarray  # B x B
    books: tuple[BookLabel, ...]
    measure: str
    linkage: str


@dataclass(frozen=True)
class MeasureCorrelation:
    values: np.ndarray
    measures: tuple[str, ...]


def _feature_rows(matrix) -> np.ndarray:
    if isinstance(matrix, (DocTermMatrix, WeightMatrix)):
        return matrix.dense()
    return np.asarray(matrix, dtype=np.float64)


def pairwise(matrix, measure: str) -> DistanceMatrix:
    """Chapter-by-chapter distance matrix under one measure."""
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")
    X = _feature_rows(matrix)
    if X.shape[0] < 2:
        raise ValueError("need at least 2 documents")
    if measure in ("jaccard", "cosine"):
        zero = np.flatnonzero(np.abs(X).sum(axis=1) == 0)
        if zero.size:
            exc = BothZero if measure == "jaccard" else ZeroVector
            raise exc(f"{measure} undefined with all-zero rows {zero[:10].tolist()}")
    values = _kernels.pairwise(X, _METRIC_CODE[measure])
    labels = tuple(getattr(matrix, "rows", tuple(range(X.shape[0]))))
    return DistanceMatrix(values, labels, measure)


def cross_distances(A, B, measure: str) -> np.ndarray:
    """Distances between rows of two feature matrices (used by classifiers)."""
    return _kernels.pairwise_cross(
        np.asarray(A, dtype=np.float64), np.asarray(B, dtype=np.float64), _METRIC_CODE[measure]
    )


def book_linkage(d: DistanceMatrix, linkage: str, rows=None) -> BookDistanceMatrix:
    """Aggregate chapter-pair distances into a book-by-book matrix.

    Diagonal blocks aggregate all ordered within-book pairs including the
    zero self-pairs, so min linkage gives a zero diagonal while mean/median
    reflect within-book spread.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r}; expected one of {LINKAGES}")
    labels = tuple(rows) if rows is not None else d.labels
    books: dict[int, BookLabel] = {}
    for book, _ in labels:
        books.setdefault(book.id, book)
    order = tuple(books[i] for i in sorted(books))
    ids = np.array([book.id for book, _ in labels])
    agg = {"min": np.min, "max": np.max, "mean": np.mean, "median": np.median}[linkage]
    B = len(order)
    values = np.zeros((B, B), dtype=np.float64)
    for a in range(B):
        rows_a = ids == order[a].id
        for b in range(a, B):
            block = d.values[np.ix_(rows_a, ids == order[b].id)]
            values[a, b] = values[b, a] = float(agg(block))
    return BookDistanceMatrix(values, order, d.measure, linkage)


def measure_correlation(matrix, measures=MEASURES, method: str = "pearson") -> MeasureCorrelation:
    """Correlation between measures over the strict upper triangles."""
    X = _feature_rows(matrix)
    if X.shape[0] < 2:
        raise ValueError("need at least 2 documents")
    iu = np.triu_indices(X.shape[0], k=1)
    vectors = []
    for m in measures:
        vec = pairwise(X, m).values[iu]
        if np.ptp(vec) == 0:
            raise DegenerateMeasure(f"{m} distances have zero variance")
        vectors.append(vec)
    stacked = np.vstack(vectors)
    if method == "spearman":
        from scipy.stats import rankdata

        stacked = np.vstack([rankdata(v) for v in stacked])
    elif method != "pearson":
        raise ValueError(f"unknown correlation method {method!r}")
    return MeasureCorrelation(np.corrcoef(stacked), tuple(measures))


@dataclass
class MetricReport:
    """Axiom-by-axiom violation lists from metric_check."""

    measure: str
    triples_checked: int
    negative: list = field(default_factory=list)  # (i, j, value)
    asymmetric: list = field(default_factory=list)  # (i, j, d_ij, d_ji)
    nonzero_diagonal: list = field(default_factory=list)  # (i, value)
    identity: list = field(default_factory=list)  # (i, j, value) equal rows, d > tol
    triangle: list = field(default_factory=list)  # (i, j, k, excess)

    @property
    def ok(self) -> bool:
        return not (
            self.negative or self.asymmetric or self.nonzero_diagonal
            or self.identity or self.triangle
        )

    def summary(self) -> str:
        return (
            f"{self.measure}: negative={len(self.negative)} "
            f"asymmetric={len(self.asymmetric)} diagonal={len(self.nonzero_diagonal)} "
            f"identity={len(self.identity)} "
            f"triangle={len(self.triangle)}/{self.triples_checked}"
        )


def metric_check(
    d: DistanceMatrix,
    samples: int = 10000,
    seed: int = 0,
    features: np.ndarray | None = None,
    tol: float = 0.0,
) -> MetricReport:
    """Check the metric axioms; reports violations instead of raising.

    Nonnegativity, symmetry and the zero diagonal are checked exhaustively;
    identity of indiscernibles on equal feature rows (when ``features`` is
    given); the triangle inequality on ``samples`` seeded random triples.
    """
    v = d.values
    n = v.shape[0]
    report = MetricReport(d.measure, samples)
    for i, j in zip(*np.nonzero(v < -tol)):
        report.negative.append((int(i), int(j), float(v[i, j])))
    for i, j in zip(*np.nonzero(~np.isclose(v, v.T, rtol=0, atol=0))):
        if i < j:
            report.asymmetric.append((int(i), int(j), float(v[i, j]), float(v[j, i])))
    for i in np.nonzero(np.abs(np.diag(v)) > tol)[0]:
        report.nonzero_diagonal.append((int(i), float(v[i, i])))
    if features is not None:
        F = np.asarray(features)
        for i in range(n - 1):
            same = np.flatnonzero((F[i + 1 :] == F[i]).all(axis=1)) + i + 1
            for j in same:
                if v[i, j] > max(tol, 1e-12):
                    report.identity.append((int(i), int(j), float(v[i, j])))
    rng = np.random.default_rng(seed)
    triples = rng.integers(0, n, size=(samples, 3))
    excess = v[triples[:, 0], triples[:, 2]] - (
        v[triples[:, 0], triples[:, 1]] + v[triples[:, 1], triples[:, 2]]
    )
    slack = 1e-12 * np.maximum(1.0, np.abs(v).max())  # float round-off allowance
    for idx in np.flatnonzero(excess > slack):
        i, j, k = (int(x) for x in triples[idx])
        report.triangle.append((i, j, k, float(excess[idx])))
    return report


# --- CSV export ----------------------------------------------------------

def _doc_label(label) -> str:
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[0], BookLabel):
        return f"{label[0].name}:{label[1]}"
    return str(label)


def write_distance_csv(d: DistanceMatrix, path: str | Path) -> None:
    names = [_doc_label(lb) for lb in d.labels]
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + names)
        for name, row in zip(names, d.values):
            writer.writerow([name] + [repr(float(x)) for x in row])


def write_book_distance_csv(bd: BookDistanceMatrix, path: str | Path) -> None:
    names = [b.name for b in bd.books]
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + names)
        for name, row in zip(names, bd.values):
            writer.writerow([name] + [repr(float(x)) for x in row])


def write_correlation_csv(mc: MeasureCorrelation, path: str | Path) -> None:
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + list(mc.measures))
        for name, row in zip(mc.measures, mc.values):
            writer.writerow([name] + [repr(float(x)) for x in row])
