"""Random forest of Gini decision trees on bootstrap samples.

Each tree draws a bootstrap sample of the training rows and, at every node,
searches a fresh random feature subset for the split with the lowest
weighted Gini impurity. All randomness flows from one 64-bit seed through
spawned per-tree generators, so equal seeds give bit-identical forests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import InvalidHyperparameter
from . import LabeledDataset


@dataclass(frozen=True)
class TreeNode:
    feature: int  # global column; -1 marks a leaf
    threshold: float
    left: "TreeNode | None"
    right: "TreeNode | None"
    counts: np.ndarray | None  # label distribution at a leaf


@dataclass(frozen=True)
class RfModel:
    trees: tuple[TreeNode, ...]
    n_trees: int
    max_depth: int | None
    features_per_split: int
    seed: int
    n_classes: int
    n_features: int

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        """Fraction of trees voting for each class."""
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros((X.shape[0], self.n_classes), dtype=np.float64)
        for i, x in enumerate(X):
            for tree in self.trees:
                votes[i, _tree_vote(tree, x)] += 1.0
        return votes / self.n_trees


def _tree_vote(node: TreeNode, x: np.ndarray) -> int:
    while node.feature >= 0:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return int(np.argmax(node.counts))


def _grow(X, y, depth, max_depth, mtry, n_classes, rng) -> TreeNode:
    counts = np.bincount(y, minlength=n_classes).astype(np.int64)
    if (
        len(y) < 2
        or (counts > 0).sum() == 1
        or (max_depth is not None and depth >= max_depth)
    ):
        return TreeNode(-1, 0.0, None, None, counts)
    feats = rng.choice(X.shape[1], size=mtry, replace=False)
    col, threshold, _ = _kernels.best_split(
        np.ascontiguousarray(X[:, feats]), y, n_classes
    )
    if col < 0:
        return TreeNode(-1, 0.0, None, None, counts)
    feature = int(feats[col])
    mask = X[:, feature] <= threshold
    if not mask.any() or mask.all():  # midpoint rounded onto a boundary value
        return TreeNode(-1, 0.0, None, None, counts)
    left = _grow(X[mask], y[mask], depth + 1, max_depth, mtry, n_classes, rng)
    right = _grow(X[~mask], y[~mask], depth + 1, max_depth, mtry, n_classes, rng)
    return TreeNode(feature, float(threshold), left, right, None)


def train_rf(
    data: LabeledDataset,
    n_trees: int = 50,
    max_depth: int | None = None,
    features_per_split: int | None = None,
    seed: int = 0,
) -> RfModel:
    if n_trees < 1:
        raise InvalidHyperparameter(f"n_trees must be >= 1, got {n_trees}")
    if max_depth is not None and max_depth < 1:
        raise InvalidHyperparameter(f"max_depth must be >= 1 or None, got {max_depth}")
    mtry = features_per_split if features_per_split is not None else math.isqrt(data.p - 1) + 1
    if not 1 <= mtry <= data.p:
        raise InvalidHyperparameter(f"features_per_split must be in 1..{data.p}, got {mtry}")

    children = np.random.SeedSequence(seed).spawn(n_trees)
    trees = []
    for child in children:
        rng = np.random.default_rng(child)
        boot = rng.integers(0, data.n, size=data.n)
        trees.append(
            _grow(data.features[boot], data.labels[boot], 0, max_depth, mtry, data.n_classes, rng)
        )
    return RfModel(
        tuple(trees), int(n_trees), max_depth, int(mtry), int(seed), data.n_classes, data.p
    )
