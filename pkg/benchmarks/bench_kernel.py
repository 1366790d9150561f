#!/usr/bin/env python3
"""Benchmark the compiled series kernel against the pure-Python fallback.

Workloads mirror the hot paths: dense one-variable expansion to high degree
(semigroup-series checks) and multivariate expand/decompose round trips.

Usage: python benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import random
import time

import reszeta.kernel as kernel
import reszeta.series as series
from reszeta import _kernel_py

try:
    from reszeta import _kernel_c
except ImportError:
    _kernel_c = None


def workload_semigroup():
    """One-variable expansions to degree 400 with negative exponents."""
    total = 0
    for gens in ((4, 6, 13), (2, 7), (3, 5), (5, 6, 7)):
        factors = {(g,): -1 for g in gens}
        factors[(gens[0] * gens[-1],)] = 1
        f = series.expand_factored(series.FactoredSeries(1, factors), 400)
        total += len(f)
    return total


def workload_dense():
    """Full four-variable degree ball (the worst decompose input)."""
    F = series.FactoredSeries(
        4, {(1, 0, 0, 0): -1, (0, 1, 0, 0): -1, (0, 0, 1, 0): -1, (0, 0, 0, 1): -1}
    )
    f = series.expand_factored(F, 36)
    return len(series.decompose(f).factors)


def workload_roundtrip():
    rng = random.Random(7)
    total = 0
    for _ in range(60):
        r = rng.randint(2, 4)
        factors = {}
        for _k in range(rng.randint(2, 6)):
            vec = tuple(rng.randint(0, 5) for _ in range(r))
            if any(vec):
                factors[vec] = rng.choice([-2, -1, 1, 2])
        F = series.FactoredSeries(r, factors)
        f = series.expand_factored(F, 28)
        total += len(series.decompose(f).factors)
    return total


def run(name, fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = [("python", _kernel_py)]
    if _kernel_c is not None:
        backends.insert(0, ("c", _kernel_c))

    print(f"{'workload':<22}{'backend':<10}{'best (s)':<12}ratio")
    for wname, fn in (("semigroup-expand-400", workload_semigroup),
                      ("dense-ball-4var-36", workload_dense),
                      ("roundtrip-mixed", workload_roundtrip)):
        base = None
        for bname, impl in backends:
            kernel.mul_packed = impl.mul_packed
            t, check = run(wname, fn, args.repeat)
            if base is None:
                base = t
            print(f"{wname:<22}{bname:<10}{t:<12.4f}{t / base:.2f}x  (checksum {check})")
    kernel.mul_packed = backends[0][1].mul_packed


if __name__ == "__main__":
    main()
