#!/usr/bin/env python3
"""Numba loop kernels against their numpy counterparts.

Both versions are called directly, so one process times both backends
whatever PHITORSION_BACKEND says.  The first numba call (compilation) is
excluded.  Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from phitorsion.kernels import LOOP_KERNELS, NUMPY_KERNELS


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def workloads():
    n = np.arange(1, 20001, dtype=np.float64)
    lam = n * n * 1e-4
    mult = np.full_like(lam, 2.0)
    ts = np.geomspace(1e-3, 10.0, 400)
    theta = np.angle(np.exp(1j * np.linspace(-2.3, 2.3, 2000)))
    xi = 3.0 * np.exp(1j * theta)
    return {
        "heat_sum": (lam, mult, ts),
        "theta_dual": (0.25, 1.0, np.geomspace(1e-2, 50.0, 5000)),
        "resolvent_power_sum": (lam[:4000], mult[:4000], xi, 2),
        "dirichlet_sum": (lam, mult, 1.7),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}{'max rel diff':>14}")
    for name, inputs in workloads().items():
        loop, vec = LOOP_KERNELS[name], NUMPY_KERNELS[name]
        a, b = loop(*inputs), vec(*inputs)  # warm-up and compile
        diff = float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.maximum(np.abs(np.asarray(b)), 1e-300)))
        t_loop = best_of(loop, inputs, args.repeat)
        t_vec = best_of(vec, inputs, args.repeat)
        print(f"{name:<22}{t_loop * 1e3:>12.3f}{t_vec * 1e3:>12.3f}{t_vec / t_loop:>10.2f}{diff:>14.2e}")


if __name__ == "__main__":
    main()
