"""Benchmark the compiled RK4 kernel against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--dims 6,6,6] [--steps 200]

Both backends advance the same lossy double-swap initial state and the result
difference is reported alongside the timings, so this doubles as an
equivalence spot check.
"""

import argparse
import importlib
import time

import numpy as np

from modeswap.dynamics import LOSSY_DEFAULTS, build_generators
from modeswap.fockspace import ModeLayout, fock_state


def load_backends():
    backends = {}
    try:
        backends["cython"] = importlib.import_module("modeswap._kernel").propagate
    except ImportError:
        print("compiled kernel not available; benchmarking the fallback only")
    backends["python"] = importlib.import_module("modeswap._kernel_py").propagate
    return backends


def bench(propagate, dims, nsteps, dt=1e-3, repeats=3):
    layout = ModeLayout(dims)
    gen = build_generators(layout, LOSSY_DEFAULTS)
    rho0 = fock_state((1, 0, 0), layout).rho
    g1 = np.ones(2 * nsteps + 1)
    g2 = np.zeros(2 * nsteps + 1)

    args = (
        gen.h_indptr, gen.h_indices, gen.h1_data, gen.h2_data,
        gen.jump_arrays, gen.ndiag, g1, g2, dt, nsteps,
    )
    out = propagate(rho0, *args)  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = propagate(rho0, *args)
        best = min(best, time.perf_counter() - t0)
    return best / nsteps, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", default="6,6,6")
    parser.add_argument("--steps", type=int, default=200)
    args = parser.parse_args()
    dims = tuple(int(d) for d in args.dims.split(","))

    results = {}
    for name, prop in load_backends().items():
        per_step, out = bench(prop, dims, args.steps)
        results[name] = (per_step, out)
        print(f"{name:8s} {per_step * 1e3:8.3f} ms/step  (dims {dims}, {args.steps} steps)")

    if len(results) == 2:
        diff = float(np.max(np.abs(results["cython"][1] - results["python"][1])))
        ratio = results["python"][0] / results["cython"][0]
        print(f"speedup  {ratio:8.2f}x")
        print(f"max elementwise backend difference: {diff:.3e}")


if __name__ == "__main__":
    main()
