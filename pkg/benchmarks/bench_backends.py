"""Benchmark the compiled kernel extension against the pure-Python twin.

Usage: python benchmarks/bench_backends.py [--seeds N] [--repeat N]
"""
from __future__ import annotations

import argparse
import statistics
import time

from capinflow import BASELINE_MOMENTS, BASELINE_PARAMS
from capinflow._backend import available_backends, pack_model


def time_solve_period(kernel, mv, repeat: int) -> float:
    lo = 0.11702127759574479
    hi = 0.24999999899999998
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            out = kernel.solve_period(mv, 10.0, 10.0, 2.31, 1150.0, 16.5, 0.08, lo, hi)
            assert out[0] == 0
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def time_full_runs(backend_name: str, seeds: int) -> float:
    import importlib
    import os
    import subprocess
    import sys

    code = (
        "import time, capinflow as ci\n"
        f"assert ci.BACKEND == {backend_name!r}, ci.BACKEND\n"
        "p, s = ci.BASELINE_PARAMS, ci.BASELINE_MOMENTS\n"
        "t0 = time.perf_counter()\n"
        f"for seed in range({seeds}):\n"
        "    ci.run(p, s, seed=seed)\n"
        "print(time.perf_counter() - t0)\n"
    )
    env = dict(os.environ, CAPINFLOW_BACKEND=backend_name)
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    return float(out.stdout.strip())


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args()

    mv = pack_model(BASELINE_PARAMS, BASELINE_MOMENTS)
    backends = available_backends()
    print(f"backends available: {', '.join(backends)}")

    kernel_times = {}
    for name, kernel in backends.items():
        t = time_solve_period(kernel, mv, args.repeat)
        kernel_times[name] = t
        print(f"solve_period [{name:7s}]: {1e6 * t:9.1f} us/call")
    if len(kernel_times) == 2:
        print(f"kernel speedup: {kernel_times['python'] / kernel_times['cython']:.1f}x")

    run_times = {}
    for name in backends:
        t = time_full_runs(name, args.seeds)
        run_times[name] = t
        print(f"{args.seeds} full runs [{name:7s}]: {t:7.3f} s")
    if len(run_times) == 2:
        print(f"full-run speedup: {run_times['python'] / run_times['cython']:.1f}x")


if __name__ == "__main__":
    main()
