"""Timing comparison of the compiled and pure-python integration kernels.

Run as: python benchmarks/bench_kernels.py [steps]
"""
import sys
import time

import numpy as np

from stripforge import _kernels_py

try:
    from stripforge import _kernels
except ImportError:
    _kernels = None


def time_call(fn, *args, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 20000
    h = 1e-3
    t = h / 2.0 * np.arange(2 * n - 1)
    a = 1.0 + 0.3 * np.sin(t)
    b = 0.5 * np.cos(1.3 * t)
    w = np.ones_like(a)
    frame_args = (
        a, b, w, h,
        np.zeros(3),
        np.array([1.0, 0.0, 0.0]),
        np.array([0.0, 1.0, 0.0]),
        np.array([0.0, 0.0, 1.0]),
    )
    duff_args = (0.5, 0.8, 0.0, h / 2.0, 2 * (n - 1))

    rows = [("python", _kernels_py)]
    if _kernels is not None:
        rows.append(("cython", _kernels))
    results = {}
    for name, mod in rows:
        tf = time_call(mod.frame_rk4, *frame_args)
        td = time_call(mod.duffing_rk4, *duff_args)
        results[name] = (tf, td)
        print(f"{name:>7}: frame_rk4 {tf * 1e3:8.2f} ms   duffing_rk4 {td * 1e3:8.2f} ms")
    if len(results) == 2:
        pf = results["python"][0] / results["cython"][0]
        pd = results["python"][1] / results["cython"][1]
        print(f"speedup: frame_rk4 {pf:.1f}x   duffing_rk4 {pd:.1f}x")


if __name__ == "__main__":
    main()
