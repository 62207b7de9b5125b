"""K-nearest-neighbor voting over any of the four distance measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..distance import MEASURES, cross_distances
from ..errors import InvalidHyperparameter
from . import LabeledDataset


@dataclass(frozen=True)
class KnnModel:
    features: np.ndarray  # stored training matrix
    labels: np.ndarray
    k: int
    measure: str
    n_classes: int

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        """Vote fraction per class among the k nearest training rows.

        Distance ties at the k-th radius are broken by training row order
        (stable sort).
        """
        dist = cross_distances(np.asarray(X, dtype=np.float64), self.features, self.measure)
        scores = np.empty((dist.shape[0], self.n_classes), dtype=np.float64)
        for i, row in enumerate(dist):
            nearest = np.argsort(row, kind="stable")[: self.k]
            votes = np.bincount(self.labels[nearest], minlength=self.n_classes)
            scores[i] = votes / self.k
        return scores


def train_knn(data: LabeledDataset, k: int, measure: str = "euclidean") -> KnnModel:
    """Store the training set; all work happens at query time."""
    if not 1 <= k <= data.n:
        raise InvalidHyperparameter(f"k must be in 1..{data.n}, got {k}")
    if measure not in MEASURES:
        raise InvalidHyperparameter(f"unknown measure {measure!r}")
    return KnnModel(data.features.copy(), data.labels.copy(), int(k), measure, data.n_classes)
