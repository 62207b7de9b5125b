"""Compiled extension vs numpy fallback: both backends must agree."""

import math

import numpy as np
import pytest

from scriptmine._kernels import _impl, fallback

BACKENDS = [fallback] if _impl is fallback else [fallback, _impl]
IDS = ["fallback"] if _impl is fallback else ["fallback", "compiled"]


def brute_distance(x, y, metric):
    if metric == 0:
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(x, y)))
    if metric == 1:
        return sum(abs(a - b) for a, b in zip(x, y))
    if metric == 2:
        return 1.0 - sum(min(a, b) for a, b in zip(x, y)) / sum(max(a, b) for a, b in zip(x, y))
    dot = sum(a * b for a, b in zip(x, y))
    nx = math.sqrt(sum(a * a for a in x))
    ny = math.sqrt(sum(b * b for b in y))
    return 1.0 - dot / (nx * ny)


@pytest.fixture(scope="module")
def X():
    rng = np.random.default_rng(1234)
    # counts-like data, no zero rows
    X = rng.integers(0, 6, size=(18, 25)).astype(np.float64)
    X[X.sum(axis=1) == 0, 0] = 1
    return X


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
@pytest.mark.parametrize("metric", [0, 1, 2, 3])
class TestPairwise:
    def test_matches_brute_force(self, impl, metric, X):
        D = impl.pairwise(X, metric)
        for i in range(X.shape[0]):
            for j in range(X.shape[0]):
                expected = 0.0 if i == j else brute_distance(X[i], X[j], metric)
                assert D[i, j] == pytest.approx(expected, abs=1e-10)

    def test_symmetric_zero_diagonal(self, impl, metric, X):
        D = impl.pairwise(X, metric)
        assert np.array_equal(D, D.T)
        assert (np.diag(D) == 0).all()
        assert (D >= 0).all()

    def test_cross_matches_pairwise(self, impl, metric, X):
        D = impl.pairwise(X, metric)
        C = impl.pairwise_cross(X[:7], X[7:], metric)
        assert np.allclose(C, D[:7, 7:], atol=1e-12)


def test_backends_agree_when_compiled_present(X):
    if len(BACKENDS) < 2:
        pytest.skip("compiled extension not built")
    for metric in (0, 1, 2, 3):
        a = fallback.pairwise(X, metric)
        b = _impl.pairwise(X, metric)
        assert np.allclose(a, b, atol=1e-10)


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
def test_hinge_epoch_learns_separable(impl):
    rng = np.random.default_rng(5)
    X = np.vstack(
        [rng.normal(2.0, 0.3, size=(20, 3)), rng.normal(-2.0, 0.3, size=(20, 3))]
    )
    y = np.array([1.0] * 20 + [-1.0] * 20)
    w = np.zeros(3)
    b = 0.0
    steps = 0
    lam = 0.01
    for _ in range(60):
        order = rng.permutation(40).astype(np.int64)
        b, steps = impl.hinge_epoch(X, y, w, b, lam, steps, order)
    pred = np.sign(X @ w - b)
    assert (pred == y).all()


@pytest.mark.parametrize("impl", BACKENDS, ids=IDS)
class TestBestSplit:
    def test_perfect_split(self, impl):
        X = np.array([[0.0], [1.0], [10.0], [11.0]])
        y = np.array([0, 0, 1, 1], dtype=np.int64)
        col, thr, gain = impl.best_split(X, y, 2)
        assert col == 0
        assert thr == pytest.approx(5.5)
        assert gain == pytest.approx(0.5)  # parent gini 0.5, children pure

    def test_no_split_possible(self, impl):
        X = np.ones((4, 2))
        y = np.array([0, 1, 0, 1], dtype=np.int64)
        assert impl.best_split(X, y, 2)[0] == -1

    def test_matches_exhaustive_search(self, impl):
        rng = np.random.default_rng(77)
        X = rng.integers(0, 4, size=(25, 6)).astype(np.float64)
        y = rng.integers(0, 3, size=25).astype(np.int64)
        col, thr, gain = impl.best_split(X, y, 3)

        def weighted_gini(mask):
            out = 0.0
            for part in (y[mask], y[~mask]):
                if part.size == 0:
                    return None
                fracs = np.bincount(part, minlength=3) / part.size
                out += (part.size / y.size) * (1.0 - (fracs**2).sum())
            return out

        best = None
        for c in range(6):
            for cut in np.unique(X[:, c])[:-1]:
                wg = weighted_gini(X[:, c] <= cut)
                if wg is not None and (best is None or wg < best - 1e-12):
                    best = wg
        parent = 1.0 - ((np.bincount(y, minlength=3) / y.size) ** 2).sum()
        assert col >= 0
        assert parent - gain == pytest.approx(best, abs=1e-10)
        # returned threshold actually induces the claimed partition quality
        assert weighted_gini(X[:, col] <= thr) == pytest.approx(best, abs=1e-10)
