"""Book-label classifiers over document term vectors.

Four model families trained from scratch: multinomial naive bayes, k-nearest
neighbors, linear soft-margin SVM (stochastic subgradient on the hinge
objective, one-vs-rest) and a random forest of Gini trees. All share the
same surface: ``train_*`` builds an immutable model, ``classify`` scores one
vector, ``model.decision_scores`` scores a batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dtm import DocTermMatrix, WeightMatrix
from ..errors import DimensionMismatch, InvalidHyperparameter

__all__ = [
    "LabeledDataset",
    "dataset_from_matrix",
    "classify",
    "kernel",
    "train_mnb",
    "train_knn",
    "train_svm",
    "train_rf",
    "MnbModel",
    "KnnModel",
    "SvmModel",
    "RfModel",
    "save_model",
    "load_model",
]


@dataclass(frozen=True)
class LabeledDataset:
    features: np.ndarray  # n x p, float64
    labels: np.ndarray  # n, int64, values in 0..n_classes-1
    n_classes: int

    def __post_init__(self):
        object.__setattr__(self, "features", np.ascontiguousarray(self.features, dtype=np.float64))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=np.int64))
        if self.features.shape[0] != self.labels.shape[0]:
            raise DimensionMismatch("feature and label counts differ")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.n_classes):
            raise InvalidHyperparameter("labels out of range for n_classes")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    def subset(self, idx) -> "LabeledDataset":
        return LabeledDataset(self.features[idx], self.labels[idx], self.n_classes)


def dataset_from_matrix(matrix: DocTermMatrix | WeightMatrix) -> LabeledDataset:
    """Dense labeled dataset from a count or weight matrix."""
    labels = np.array([book.id for book, _ in matrix.rows], dtype=np.int64)
    return LabeledDataset(matrix.dense(), labels, int(labels.max()) + 1)


def classify(model, x) -> tuple[int, np.ndarray]:
    """(label, per-class scores) for one feature vector.

    The label is the argmax of the scores; exact ties go to the smallest
    class id.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape[0] != model.n_features:
        raise DimensionMismatch(f"expected {model.n_features} features, got {x.shape[0]}")
    scores = model.decision_scores(x[None, :])[0]
    return int(np.argmax(scores)), scores


def kernel(x, y, kind: str = "linear", gamma: float = 1.0) -> float:
    """Inner-product kernels: linear dot product or rbf exp(-gamma*||x-y||^2)."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise DimensionMismatch("kernel arguments differ in length")
    if kind == "linear":
        return float(x @ y)
    if kind == "rbf":
        diff = x - y
        return float(np.exp(-gamma * (diff @ diff)))
    raise InvalidHyperparameter(f"unknown kernel kind {kind!r}")


from .forest import RfModel, train_rf  # noqa: E402
from .knn import KnnModel, train_knn  # noqa: E402
from .mnb import MnbModel, train_mnb  # noqa: E402
from .serialize import load_model, save_model  # noqa: E402
from .svm import SvmModel, train_svm  # noqa: E402
