"""Multinomial naive bayes with additive (Laplace) smoothing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyClass, InvalidHyperparameter
from . import LabeledDataset


@dataclass(frozen=True)
class MnbModel:
    log_priors: np.ndarray  # T
    log_likelihoods: np.ndarray  # T x p
    smoothing: float

    @property
    def n_features(self) -> int:
        return self.log_likelihoods.shape[1]

    @property
    def n_classes(self) -> int:
        return self.log_likelihoods.shape[0]

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        """Unnormalized log posteriors, one row per input row."""
        return self.log_priors + np.asarray(X, dtype=np.float64) @ self.log_likelihoods.T

    def posteriors(self, X: np.ndarray) -> np.ndarray:
        """Normalized class posteriors (rows sum to 1)."""
        scores = self.decision_scores(X)
        scores = scores - scores.max(axis=1, keepdims=True)
        probs = np.exp(scores)
        return probs / probs.sum(axis=1, keepdims=True)


def train_mnb(data: LabeledDataset, alpha: float = 1.0) -> MnbModel:
    """Fit priors n_t/n and smoothed term likelihoods (c_tj + a)/(c_t + a*p)."""
    if alpha <= 0:
        raise InvalidHyperparameter(f"smoothing must be > 0, got {alpha}")
    n, p = data.features.shape
    counts = np.zeros((data.n_classes, p), dtype=np.float64)
    class_sizes = np.bincount(data.labels, minlength=data.n_classes)
    if (class_sizes == 0).any():
        missing = np.flatnonzero(class_sizes == 0).tolist()
        raise EmptyClass(f"classes with no training documents: {missing}")
    for t in range(data.n_classes):
        counts[t] = data.features[data.labels == t].sum(axis=0)
    log_priors = np.log(class_sizes / n)
    totals = counts.sum(axis=1, keepdims=True)
    log_likelihoods = np.log((counts + alpha) / (totals + alpha * p))
    return MnbModel(log_priors, log_likelihoods, float(alpha))
