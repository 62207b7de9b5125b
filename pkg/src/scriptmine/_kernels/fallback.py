"""Numpy implementations of the hot kernels.

Used when the compiled extension is unavailable (or explicitly disabled via
SCRIPTMINE_PURE_PYTHON=1). Function signatures and semantics match
``_speedups`` exactly; the two are cross-checked in the test suite.
"""

from __future__ import annotations

import numpy as np

BACKEND = "fallback"

EUCLIDEAN, MANHATTAN, JACCARD, COSINE = 0, 1, 2, 3


def _row_block(x: np.ndarray, block: np.ndarray, metric: int, xn, bn):
    if metric == EUCLIDEAN:
        diff = block - x
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))
    if metric == MANHATTAN:
        return np.abs(block - x).sum(axis=1)
    if metric == JACCARD:
        mins = np.minimum(block, x).sum(axis=1)
        maxs = np.maximum(block, x).sum(axis=1)
        return 1.0 - mins / maxs
    sims = (block @ x) / (bn * xn)
    return np.maximum(1.0 - sims, 0.0)  # clamp -1ulp artifacts


def pairwise(X: np.ndarray, metric: int) -> np.ndarray:
    """Symmetric distance matrix over rows of X; zero diagonal."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    norms = np.sqrt(np.einsum("ij,ij->i", X, X)) if metric == COSINE else None
    out = np.zeros((n, n), dtype=np.float64)
    for i in range(n - 1):
        d = _row_block(
            X[i], X[i + 1 :], metric,
            norms[i] if norms is not None else None,
            norms[i + 1 :] if norms is not None else None,
        )
        out[i, i + 1 :] = d
        out[i + 1 :, i] = d
    return out


def pairwise_cross(A: np.ndarray, B: np.ndarray, metric: int) -> np.ndarray:
    """Distances between every row of A and every row of B."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    an = np.sqrt(np.einsum("ij,ij->i", A, A)) if metric == COSINE else None
    bn = np.sqrt(np.einsum("ij,ij->i", B, B)) if metric == COSINE else None
    out = np.empty((A.shape[0], B.shape[0]), dtype=np.float64)
    for i in range(A.shape[0]):
        out[i] = _row_block(
            A[i], B, metric,
            an[i] if an is not None else None,
            bn,
        )
    return out


def hinge_epoch(X, y, w, b, lam, t, order):
    """One stochastic subgradient pass over ``order``.

    Objective: mean hinge loss + lam * ||w||^2, decision w.x - b, step
    1/(lam * t). Updates w in place; returns the new (b, t).
    """
    for idx in order:
        t += 1
        eta = 1.0 / (lam * t)
        yi = y[idx]
        xi = X[idx]
        margin = yi * (xi @ w - b)
        w *= 1.0 - 2.0 * eta * lam
        if margin < 1.0:
            w += (eta * yi) * xi
            b -= eta * yi
    return b, t


def best_split(X: np.ndarray, y: np.ndarray, n_classes: int):
    """Best axis-aligned split of the node data by Gini impurity decrease.

    X holds the candidate feature columns only. Returns
    (column, threshold, impurity_decrease); column is -1 when no split
    separates the data. Ties go to the first (column, position) scanned.
    """
    n = X.shape[0]
    total = np.bincount(y, minlength=n_classes).astype(np.float64)
    parent = 1.0 - ((total / n) ** 2).sum()

    best_col, best_thr, best_weighted = -1, 0.0, np.inf
    onehot = np.zeros((n, n_classes), dtype=np.float64)
    onehot[np.arange(n), y] = 1.0
    for col in range(X.shape[1]):
        values = X[:, col]
        order = np.argsort(values, kind="stable")
        sorted_vals = values[order]
        valid = sorted_vals[:-1] != sorted_vals[1:]
        if not valid.any():
            continue
        left = np.cumsum(onehot[order], axis=0)[:-1]
        nl = np.arange(1, n, dtype=np.float64)
        nr = n - nl
        gini_l = 1.0 - ((left / nl[:, None]) ** 2).sum(axis=1)
        gini_r = 1.0 - (((total - left) / nr[:, None]) ** 2).sum(axis=1)
        weighted = (nl / n) * gini_l + (nr / n) * gini_r
        weighted[~valid] = np.inf
        pos = int(np.argmin(weighted))
        if weighted[pos] < best_weighted:
            best_weighted = weighted[pos]
            best_col = col
            best_thr = (sorted_vals[pos] + sorted_vals[pos + 1]) / 2.0
    if best_col < 0:
        return -1, 0.0, 0.0
    return best_col, float(best_thr), float(parent - best_weighted)
