"""Linear soft-margin SVM trained by stochastic subgradient descent.

Per binary problem the objective is mean hinge loss plus lam * ||w||^2 with
decision function w.x - b, minimized with step size 1/(lam * t). Multiclass
is one-vs-rest; rows are put into a canonical order before the seeded
shuffles so the visit sequence depends only on the seed, not on how the
caller happened to order the training set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import InvalidHyperparameter, NonFiniteObjective
from . import LabeledDataset


@dataclass(frozen=True)
class SvmModel:
    weights: np.ndarray  # T x p, one-vs-rest
    biases: np.ndarray  # T
    lam: float
    epochs: int
    seed: int
    objective_traces: np.ndarray  # T x epochs, objective after each epoch

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.weights.T - self.biases


def hinge_objective(X, y, w, b, lam) -> float:
    """mean(max(0, 1 - y*(X.w - b))) + lam * ||w||^2"""
    with np.errstate(over="ignore", invalid="ignore"):  # inf/nan flags divergence
        margins = y * (X @ w - b)
        return float(np.maximum(0.0, 1.0 - margins).mean() + lam * (w @ w))


def _canonical_order(data: LabeledDataset) -> np.ndarray:
    keys = [(int(data.labels[i]), data.features[i].tobytes()) for i in range(data.n)]
    return np.array(sorted(range(data.n), key=keys.__getitem__), dtype=np.int64)


def train_svm(data: LabeledDataset, lam: float, epochs: int, seed: int) -> SvmModel:
    if lam <= 0:
        raise InvalidHyperparameter(f"regularization must be > 0, got {lam}")
    if epochs < 1:
        raise InvalidHyperparameter(f"epochs must be >= 1, got {epochs}")
    order0 = _canonical_order(data)
    X = np.ascontiguousarray(data.features[order0])
    labels = data.labels[order0]
    n, p = X.shape

    T = data.n_classes
    weights = np.zeros((T, p), dtype=np.float64)
    biases = np.zeros(T, dtype=np.float64)
    traces = np.zeros((T, epochs), dtype=np.float64)
    children = np.random.SeedSequence(seed).spawn(T)
    for t in range(T):
        rng = np.random.default_rng(children[t])
        y = np.where(labels == t, 1.0, -1.0)
        w = np.zeros(p, dtype=np.float64)
        b = 0.0
        steps = 0
        for epoch in range(epochs):
            visit = rng.permutation(n).astype(np.int64)
            with np.errstate(over="ignore", invalid="ignore"):  # divergence checked below
                b, steps = _kernels.hinge_epoch(X, y, w, b, lam, steps, visit)
            obj = hinge_objective(X, y, w, b, lam)
            if not np.isfinite(obj):
                raise NonFiniteObjective(
                    f"objective diverged for class {t} at epoch {epoch}: {obj}"
                )
            traces[t, epoch] = obj
        weights[t] = w
        biases[t] = b
    return SvmModel(weights, biases, float(lam), int(epochs), int(seed), traces)
