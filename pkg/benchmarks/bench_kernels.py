"""Timing comparison of the numba and numpy kernel backends.

Runs the two hot kernels of the spectral initialization (weighted column
power and weighted gram matrix) at default experiment sizes and prints a
small table with per-call times and the speedup of numba over numpy.  Run as:

    python3 benchmarks/bench_kernels.py [--m 2000] [--n 3000] [--s 20]

The numba rows are skipped (with a note) when numba is unavailable or
disabled via COPRAM_NO_NUMBA.
"""

import argparse
import time

import numpy as np

from copram.kernels import (
    HAS_NUMBA,
    _marginals_numpy,
    _weighted_gram_numpy,
)

if HAS_NUMBA:
    from copram.kernels import _marginals_numba, _weighted_gram_numba


def time_call(fn, args, repeats):
    fn(*args)  # warm up (and JIT compile, for numba)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m", type=int, default=2000)
    parser.add_argument("--n", type=int, default=3000)
    parser.add_argument("--s", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    A = rng.standard_normal((args.m, args.n))
    y_sq = rng.standard_normal(args.m) ** 2
    A_sub = np.ascontiguousarray(A[:, : args.s])

    cases = [
        ("marginals", _marginals_numpy, (A, y_sq)),
        ("weighted_gram", _weighted_gram_numpy, (A_sub, y_sq)),
    ]
    print(f"m={args.m} n={args.n} s={args.s} repeats={args.repeats} (best of)")
    print(f"{'kernel':<15} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name, numpy_fn, call_args in cases:
        t_numpy = time_call(numpy_fn, call_args, args.repeats)
        if HAS_NUMBA:
            numba_fn = _marginals_numba if name == "marginals" else _weighted_gram_numba
            t_numba = time_call(numba_fn, call_args, args.repeats)
            ratio = t_numpy / t_numba
            print(f"{name:<15} {t_numpy * 1e3:>10.2f}ms {t_numba * 1e3:>10.2f}ms {ratio:>8.2f}x")
        else:
            print(f"{name:<15} {t_numpy * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}")
    if not HAS_NUMBA:
        print("numba backend unavailable (not installed or COPRAM_NO_NUMBA set)")


if __name__ == "__main__":
    main()
