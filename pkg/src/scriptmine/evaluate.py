"""m-fold cross-validation, grid search and the four-model benchmark.

The CV estimate uses 0-1 loss: every sample is predicted by the model
trained on the other m-1 folds, and reported CV accuracy is 1 minus the
pooled error. Mean-over-folds accuracy is reported alongside (the two
differ only by fold-size weighting).
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .atomic import atomic_path
from .classify import LabeledDataset, train_knn, train_mnb, train_rf, train_svm
from .errors import DimensionMismatch, InvalidHyperparameter, TooManyFolds

Trainer = Callable[[LabeledDataset], object]


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: np.ndarray  # n values in 0..m-1
    m: int
    seed: int

    @property
    def n(self) -> int:
        return self.fold_of.shape[0]

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold)


def make_folds(n: int, m: int, seed: int, stratify_labels=None) -> FoldAssignment:
    """Seeded shuffle, then round-robin assignment (fold sizes differ by <= 1).

    With ``stratify_labels`` the round-robin runs inside each class so every
    fold sees roughly the class balance of the whole set.
    """
    if not 2 <= m <= n:
        raise TooManyFolds(f"need 2 <= m <= n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=np.int64)
    if stratify_labels is None:
        perm = rng.permutation(n)
        fold_of[perm] = np.arange(n) % m
    else:
        labels = np.asarray(stratify_labels)
        counter = 0
        for cls in np.unique(labels):
            members = np.flatnonzero(labels == cls)
            members = members[rng.permutation(members.size)]
            for i, idx in enumerate(members):
                fold_of[idx] = (counter + i) % m
            counter += members.size
    return FoldAssignment(fold_of, m, seed)


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # T x T, rows = true class, cols = predicted

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_predictions(cls, y_true, y_pred, n_classes: int) -> "ConfusionMatrix":
        counts = np.zeros((n_classes, n_classes), dtype=np.int64)
        for t, p in zip(y_true, y_pred):
            counts[int(t), int(p)] += 1
        return cls(counts)


def accuracy(cm: ConfusionMatrix) -> float:
    """Multiclass accuracy: trace over total."""
    return float(np.trace(cm.counts) / cm.total)


def per_class_accuracy(cm: ConfusionMatrix) -> np.ndarray:
    """Binary (TP+TN)/(TP+TN+FP+FN) per class, one-vs-rest collapse."""
    c = cm.counts
    total = c.sum()
    tp = np.diag(c)
    fp = c.sum(axis=0) - tp
    fn = c.sum(axis=1) - tp
    tn = total - tp - fp - fn
    return (tp + tn) / total


@dataclass(frozen=True)
class CvResult:
    fold_accuracies: tuple[float, ...]
    cv_accuracy: float  # pooled over all held-out predictions
    mean_fold_accuracy: float
    confusion: ConfusionMatrix
    predictions: np.ndarray  # n
    scores: np.ndarray  # n x T


def cross_validate(trainer: Trainer, data: LabeledDataset, folds: FoldAssignment) -> CvResult:
    """Each sample is predicted by the model trained without its fold."""
    if folds.n != data.n:
        raise DimensionMismatch(f"fold assignment is for n={folds.n}, data has n={data.n}")
    predictions = np.empty(data.n, dtype=np.int64)
    scores = np.zeros((data.n, data.n_classes), dtype=np.float64)
    fold_accuracies = []
    for fold in range(folds.m):
        test_idx = folds.test_indices(fold)
        train_idx = folds.train_indices(fold)
        if np.unique(data.labels[test_idx]).size < 2:
            warnings.warn(f"fold {fold} holds a single class; proceeding")
        model = trainer(data.subset(train_idx))
        fold_scores = model.decision_scores(data.features[test_idx])
        fold_pred = np.argmax(fold_scores, axis=1)
        predictions[test_idx] = fold_pred
        scores[test_idx] = fold_scores
        fold_accuracies.append(float(np.mean(fold_pred == data.labels[test_idx])))
    cm = ConfusionMatrix.from_predictions(data.labels, predictions, data.n_classes)
    return CvResult(
        tuple(fold_accuracies),
        float(np.mean(predictions == data.labels)),
        float(np.mean(fold_accuracies)),
        cm,
        predictions,
        scores,
    )


@dataclass(frozen=True)
class GridSearchResult:
    grid: tuple[dict, ...]
    cv_accuracies: tuple[float, ...]
    mean_fold_accuracies: tuple[float, ...]
    best_index: int  # first grid point attaining the best pooled accuracy
    best_model: object
    results: tuple[CvResult, ...]

    @property
    def best_params(self) -> dict:
        return self.grid[self.best_index]

    @property
    def best_accuracy(self) -> float:
        return self.cv_accuracies[self.best_index]

    @property
    def best_result(self) -> CvResult:
        return self.results[self.best_index]


def grid_search(
    trainer_family: Callable[..., object],
    grid: Sequence[dict],
    data: LabeledDataset,
    folds: FoldAssignment,
) -> GridSearchResult:
    """Evaluate every grid point with the same fold assignment.

    Ties are broken by declaration order; the winning configuration is
    retrained on the full data.
    """
    if not grid:
        raise InvalidHyperparameter("empty hyperparameter grid")
    results = []
    for params in grid:
        results.append(cross_validate(lambda d: trainer_family(d, **params), data, folds))
    accuracies = [r.cv_accuracy for r in results]
    best_index = int(np.argmax(accuracies))  # argmax keeps the first of ties
    assert all(accuracies[best_index] >= a for a in accuracies)
    best_model = trainer_family(data, **grid[best_index])
    return GridSearchResult(
        tuple(dict(g) for g in grid),
        tuple(accuracies),
        tuple(r.mean_fold_accuracy for r in results),
        best_index,
        best_model,
        tuple(results),
    )


# --- the four-model comparison ------------------------------------------

MODEL_KINDS = ("mnb", "knn", "svm", "rf")


def default_grids(data: LabeledDataset, folds: FoldAssignment, seed: int) -> dict[str, list[dict]]:
    min_train = min(int(folds.train_indices(f).size) for f in range(folds.m))
    ks = [k for k in (1, 3, 5, 7, 11, 21) if k <= min_train]
    return {
        "mnb": [{"alpha": a} for a in (0.1, 0.5, 1.0, 2.0)],
        "knn": [{"k": k} for k in ks],
        "svm": [
            {"lam": lam, "epochs": e, "seed": seed}
            for lam in (1e-4, 1e-3, 1e-2, 1e-1)
            for e in (20, 50)
        ],
        "rf": [
            {
                "n_trees": t,
                "max_depth": d,
                "seed": seed,
                "features_per_split": math.isqrt(data.p - 1) + 1,
            }
            for t in (50, 200)
            for d in (None, 20)
        ],
    }


_TRAINERS: dict[str, Callable[..., object]] = {
    "mnb": train_mnb,
    "knn": train_knn,
    "svm": train_svm,
    "rf": train_rf,
}


@dataclass(frozen=True)
class BenchmarkResult:
    rows: tuple[tuple[str, dict, float], ...]  # (model, best_params, cv_accuracy)
    searches: dict[str, GridSearchResult]

    def ranking(self) -> list[str]:
        return [kind for kind, _, _ in sorted(self.rows, key=lambda r: -r[2])]


def benchmark_all(
    data: LabeledDataset,
    folds: FoldAssignment,
    grids: dict[str, list[dict]] | None = None,
    seed: int = 42,
) -> BenchmarkResult:
    """Grid-search all four model kinds with one shared fold assignment."""
    grids = grids if grids is not None else default_grids(data, folds, seed)
    searches = {}
    rows = []
    for kind in MODEL_KINDS:
        search = grid_search(_TRAINERS[kind], grids[kind], data, folds)
        searches[kind] = search
        rows.append((kind, search.best_params, search.best_accuracy))
    return BenchmarkResult(tuple(rows), searches)


# --- CSV export ----------------------------------------------------------

def write_folds_csv(folds: FoldAssignment, path: str | Path) -> None:
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_index", "fold"])
        for i, f in enumerate(folds.fold_of):
            writer.writerow([i, int(f)])


def write_confusion_csv(cm: ConfusionMatrix, class_names: Sequence[str], path: str | Path) -> None:
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["true\\predicted"] + list(class_names))
        for name, row in zip(class_names, cm.counts):
            writer.writerow([name] + [int(x) for x in row])


def write_scores_csv(
    doc_labels: Sequence[str],
    y_true,
    y_pred,
    scores: np.ndarray,
    path: str | Path,
) -> None:
    n_classes = scores.shape[1]
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["doc_label", "true", "predicted"] + [f"score_{t}" for t in range(n_classes)]
        )
        for label, t, p, row in zip(doc_labels, y_true, y_pred, scores):
            writer.writerow([label, int(t), int(p)] + [repr(float(x)) for x in row])


def write_comparison_csv(result: BenchmarkResult, path: str | Path) -> None:
    with atomic_path(path) as tmp, open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "best_params", "cv_accuracy"])
        for kind, params, acc in result.rows:
            pretty = " ".join(f"{k}={v}" for k, v in sorted(params.items()))
            writer.writerow([kind, pretty, repr(acc)])
