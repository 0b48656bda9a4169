"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs once per path to warm up (numba compilation happens there),
then ``--repeat`` times; the best wall time is reported with the speedup and
the largest difference between the two results.
"""
from __future__ import annotations

import argparse
import math
import os
import time

import numpy as np

from qls._accel import HAVE_NUMBA
from qls.phase import kernels


def _cases():
    n = 200_001
    t0, h = -1e-3, 1e-8
    t = t0 + h * np.arange(n)
    f = np.exp(-((2 * t / 4e-4) ** 2)) * np.cos(3.9e6 * t)
    g = 0.7 * f
    seeds = np.stack(np.meshgrid(np.linspace(0.3, 7.8, 32), np.linspace(0.2, 7.8, 32)), -1).reshape(-1, 2)
    seeds = seeds[seeds[:, 0] > seeds[:, 1]]
    r = np.array([1.076, 1.922])
    w = np.array([1 / 1.076, -1 / 1.922])
    closed = np.array([True, True])
    return {
        "cumulative_phase_integral (2e5 pts)": lambda: kernels.cumulative_phase_integral(f, t0, h, 3.6e6),
        "bilinear_phase (2e5 pts)": lambda: kernels.bilinear_phase(f, g, t0, h, 3.6e6),
        "penalty_descent (496 seeds)": lambda: kernels.penalty_descent(seeds, r, w, closed),
    }


def _time(fn, repeat):
    fn()
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, np.asarray(out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba not installed: only the numpy path is available")
    saved = os.environ.get("QLS_NUMBA")
    print(f"{'kernel':40s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s} {'max |diff|':>11s}")
    try:
        for name, fn in _cases().items():
            os.environ["QLS_NUMBA"] = "0"
            t_np, r_np = _time(fn, args.repeat)
            if HAVE_NUMBA:
                os.environ["QLS_NUMBA"] = "1"
                t_nb, r_nb = _time(fn, args.repeat)
                diff = float(np.max(np.abs(r_np - r_nb)))
                print(f"{name:40s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f} {diff:11.2e}")
            else:
                print(f"{name:40s} {1e3 * t_np:11.2f} {'-':>11s}")
    finally:
        if saved is None:
            os.environ.pop("QLS_NUMBA", None)
        else:
            os.environ["QLS_NUMBA"] = saved


if __name__ == "__main__":
    main()
