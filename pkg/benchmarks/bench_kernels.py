#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy reference backend.

Times depth_sweep and decide_many on random planar instances of growing size
and prints the speedup of the compiled extension.
"""
import argparse
import time

import numpy as np

from betaplurality.kernels import _ref

try:
    from betaplurality.kernels import _fast
except ImportError:
    _fast = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="50,200,800,2000")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _fast is None:
        print("compiled extension not available; only timing the numpy backend")
    rng = np.random.default_rng(args.seed)
    sizes = [int(s) for s in args.sizes.split(",")]
    header = f"{'n':>6} {'kernel':<14} {'numpy [ms]':>12} {'cython [ms]':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        cx, cy = rng.uniform(0, 1, n), rng.uniform(0, 1, n)
        p = rng.uniform(0, 1, 2)
        rad = 0.8 * np.hypot(cx - p[0], cy - p[1])
        qx, qy = rng.uniform(0, 1, 8), rng.uniform(0, 1, 8)

        t_ref = _time(lambda: _ref.depth_sweep(cx, cy, rad), args.repeat)
        t_fast = _time(lambda: _fast.depth_sweep(cx, cy, rad), args.repeat) if _fast else float("nan")
        print(f"{n:>6} {'depth_sweep':<14} {t_ref*1e3:>12.2f} {t_fast*1e3:>12.2f} {t_ref/t_fast:>8.1f}")

        t_ref = _time(lambda: _ref.decide_many(cx, cy, qx, qy, 0.8), args.repeat)
        t_fast = _time(lambda: _fast.decide_many(cx, cy, qx, qy, 0.8), args.repeat) if _fast else float("nan")
        print(f"{n:>6} {'decide_many':<14} {t_ref*1e3:>12.2f} {t_fast*1e3:>12.2f} {t_ref/t_fast:>8.1f}")


if __name__ == "__main__":
    main()
