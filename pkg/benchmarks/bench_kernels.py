#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Runs the three hot kernels on synthetic count data shaped like a mid-size
chapter corpus and prints per-kernel timings plus the speedup factor.

    python benchmarks/bench_kernels.py [--docs 300] [--terms 2000] [--repeat 3]
"""

from __future__ import annotations

import argparse
from time import perf_counter

import numpy as np

from scriptmine._kernels import fallback

try:
    from scriptmine._kernels import _speedups as compiled
except ImportError:
    compiled = None


def timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = perf_counter()
        fn()
        best = min(best, perf_counter() - t0)
    return best


def make_data(docs: int, terms: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    X = rng.poisson(0.4, size=(docs, terms)).astype(np.float64)
    X[X.sum(axis=1) == 0, 0] = 1.0
    y = np.where(rng.random(docs) < 0.5, 1.0, -1.0)
    labels = rng.integers(0, 5, size=docs).astype(np.int64)
    return X, y, labels


def bench_backend(impl, X, y, labels, repeat: int) -> dict[str, float]:
    rng = np.random.default_rng(1)
    order = rng.permutation(X.shape[0]).astype(np.int64)
    node = np.ascontiguousarray(X[:, :64])
    results = {}
    for metric, name in [(0, "pairwise euclidean"), (1, "pairwise manhattan"),
                         (2, "pairwise jaccard"), (3, "pairwise cosine")]:
        results[name] = timeit(lambda m=metric: impl.pairwise(X, m), repeat)

    def hinge():
        w = np.zeros(X.shape[1])
        impl.hinge_epoch(X, y, w, 0.0, 1e-3, 0, order)

    results["hinge epoch"] = timeit(hinge, repeat)
    results["gini best split"] = timeit(lambda: impl.best_split(node, labels, 5), repeat)
    return results


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=300)
    parser.add_argument("--terms", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    X, y, labels = make_data(args.docs, args.terms)
    print(f"data: {args.docs} docs x {args.terms} terms, best of {args.repeat}\n")

    fb = bench_backend(fallback, X, y, labels, args.repeat)
    cp = bench_backend(compiled, X, y, labels, args.repeat) if compiled else None

    width = max(len(k) for k in fb)
    header = f"{'kernel':<{width}}  {'fallback':>10}"
    if cp:
        header += f"  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fb_time in fb.items():
        line = f"{name:<{width}}  {fb_time * 1e3:>8.2f}ms"
        if cp:
            line += f"  {cp[name] * 1e3:>8.2f}ms  {fb_time / cp[name]:>7.2f}x"
        print(line)
    if not cp:
        print("\ncompiled extension not built; showing fallback only")


if __name__ == "__main__":
    main()
