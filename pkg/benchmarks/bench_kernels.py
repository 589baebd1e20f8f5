#!/usr/bin/env python3
"""Benchmark the numba and numpy backends on the hot kernels.

Usage:  python3 benchmarks/bench_kernels.py [--size N] [--repeat R]

Times both implementation sets directly through varlex._kernels.IMPLS, so the
comparison is independent of the VARLEX_BACKEND flag active in this process.
"""

import argparse
import time

import numpy as np

from varlex import _kernels as K


def _time(fn, args, repeat):
    fn(*args)  # warm (jit compile / cache touch)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def build_cases(n):
    rng = np.random.default_rng(0)
    vals = rng.normal(0, 1, n)
    side = max(2, n // 8)
    wins = K.window_matrix(vals, side)
    w = rng.normal(0, 1, n - side + 1)
    f = rng.normal(0, 1, n)
    h = 4.0 / n
    om = np.cos(2 * np.pi * np.arange(64) / 64)
    om = 0.5 * (om - np.roll(om, -32))
    n2 = max(8, int(np.sqrt(n)) // 2 * 2)
    f2 = rng.normal(0, 1, (n2, n2))
    return [
        ("containing_max", (w, side, n)),
        ("sharp_inners", (wins, 0.5, 64)),
        ("sharp_inners_median", (wins,)),
        ("local_inners", (wins, max(2, side // 2))),
        ("osc_inners", (wins,)),
        ("apply_trunc_1d", (f, h, h, 1 / np.pi, -1 / np.pi, 0.5 * h)),
        ("tstar_1d", (f, h, h, 1 / np.pi, -1 / np.pi)),
        ("apply_trunc_2d", (f2, h, h, h * h, om, True, 0.5 * h)),
        ("tstar_2d", (f2, h, h, h * h, om, True)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=2048)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = build_cases(args.size)
    backends = [b for b in ("numpy", "numba") if b in K.IMPLS]
    print(f"active backend: {K.BACKEND}; N = {args.size}; best of {args.repeat}\n")
    header = f"{'kernel':22s}" + "".join(f"{b:>12s}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for name, case_args in cases:
        times = {}
        for b in backends:
            times[b] = _time(K.IMPLS[b][name], case_args, args.repeat)
        row = f"{name:22s}" + "".join(f"{times[b] * 1e3:11.2f}m" for b in backends)
        if len(backends) == 2:
            row += f"{times['numpy'] / times['numba']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
