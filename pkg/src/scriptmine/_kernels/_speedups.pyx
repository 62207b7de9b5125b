# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the fallback kernels (see fallback.py for contracts)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

BACKEND = "compiled"

EUCLIDEAN, MANHATTAN, JACCARD, COSINE = 0, 1, 2, 3


cdef inline double _pair(const double[:, ::1] X, const double[:, ::1] Y,
                         Py_ssize_t i, Py_ssize_t j, int metric,
                         double ni, double nj) noexcept nogil:
    cdef Py_ssize_t k, p = X.shape[1]
    cdef double s = 0.0, smax = 0.0, a, b
    if metric == 0:
        for k in range(p):
            a = X[i, k] - Y[j, k]
            s += a * a
        return sqrt(s)
    if metric == 1:
        for k in range(p):
            s += fabs(X[i, k] - Y[j, k])
        return s
    if metric == 2:
        # sum(min) = (sum(a+b) - sum|a-b|)/2, sum(max) = (sum(a+b) + sum|a-b|)/2
        for k in range(p):
            a = X[i, k]
            b = Y[j, k]
            s += a + b
            smax += fabs(a - b)
        return 1.0 - (s - smax) / (s + smax)
    for k in range(p):
        s += X[i, k] * Y[j, k]
    s = 1.0 - s / (ni * nj)
    return s if s > 0.0 else 0.0


cdef cnp.ndarray _norms(const double[:, ::1] X):
    cdef Py_ssize_t i, k
    out = np.empty(X.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef double s
    for i in range(X.shape[0]):
        s = 0.0
        for k in range(X.shape[1]):
            s += X[i, k] * X[i, k]
        o[i] = sqrt(s)
    return out


def pairwise(X, int metric):
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], i, j
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] D = out
    cdef const double[::1] norms
    cdef double d
    norms_arr = _norms(Xv) if metric == COSINE else np.empty(0)
    norms = norms_arr
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                d = _pair(Xv, Xv, i, j, metric,
                          norms[i] if metric == 3 else 0.0,
                          norms[j] if metric == 3 else 0.0)
                D[i, j] = d
                D[j, i] = d
    return out


def pairwise_cross(A, B, int metric):
    cdef const double[:, ::1] Av = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] Bv = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t na = Av.shape[0], nb = Bv.shape[0], i, j
    out = np.empty((na, nb), dtype=np.float64)
    cdef double[:, ::1] D = out
    cdef const double[::1] an, bn
    an_arr = _norms(Av) if metric == COSINE else np.empty(0)
    bn_arr = _norms(Bv) if metric == COSINE else np.empty(0)
    an = an_arr
    bn = bn_arr
    with nogil:
        for i in range(na):
            for j in range(nb):
                D[i, j] = _pair(Av, Bv, i, j, metric,
                                an[i] if metric == 3 else 0.0,
                                bn[j] if metric == 3 else 0.0)
    return out


def hinge_epoch(const double[:, ::1] X, const double[::1] y, double[::1] w,
                double b, double lam, long t, const long[::1] order):
    cdef Py_ssize_t n = order.shape[0], p = X.shape[1], ii, k, idx
    cdef double eta, margin, shrink, yi
    with nogil:
        for ii in range(n):
            idx = order[ii]
            t += 1
            eta = 1.0 / (lam * t)
            yi = y[idx]
            margin = 0.0
            for k in range(p):
                margin += X[idx, k] * w[k]
            margin = yi * (margin - b)
            shrink = 1.0 - 2.0 * eta * lam
            for k in range(p):
                w[k] *= shrink
            if margin < 1.0:
                for k in range(p):
                    w[k] += eta * yi * X[idx, k]
                b -= eta * yi
    return b, t


def best_split(const double[:, ::1] X, const long[::1] y, int n_classes):
    cdef Py_ssize_t n = X.shape[0], ncols = X.shape[1], col, i, c, pos
    cdef double parent = 1.0, frac, nl, nr, gini_l, gini_r, weighted
    cdef double best_weighted = np.inf, best_thr = 0.0
    cdef Py_ssize_t best_col = -1

    total_arr = np.zeros(n_classes, dtype=np.float64)
    left_arr = np.zeros(n_classes, dtype=np.float64)
    cdef double[::1] total = total_arr, left = left_arr
    for i in range(n):
        total[y[i]] += 1.0
    for c in range(n_classes):
        frac = total[c] / n
        parent -= frac * frac

    col_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] colv = col_arr
    cdef const long[::1] order
    cdef double s

    for col in range(ncols):
        for i in range(n):
            colv[i] = X[i, col]
        order_arr = np.argsort(col_arr, kind="stable")
        order = order_arr
        for c in range(n_classes):
            left[c] = 0.0
        for pos in range(n - 1):
            left[y[order[pos]]] += 1.0
            if colv[order[pos]] == colv[order[pos + 1]]:
                continue
            nl = pos + 1.0
            nr = n - nl
            gini_l = 1.0
            gini_r = 1.0
            for c in range(n_classes):
                frac = left[c] / nl
                gini_l -= frac * frac
                frac = (total[c] - left[c]) / nr
                gini_r -= frac * frac
            weighted = (nl / n) * gini_l + (nr / n) * gini_r
            if weighted < best_weighted:
                best_weighted = weighted
                best_col = col
                best_thr = (colv[order[pos]] + colv[order[pos + 1]]) / 2.0
    if best_col < 0:
        return -1, 0.0, 0.0
    return best_col, best_thr, parent - best_weighted
