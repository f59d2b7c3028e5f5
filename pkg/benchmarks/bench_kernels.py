"""Throughput comparison of the census kernels: numpy fallback vs the
compiled extension, on identical element batches.

Run as  python3 benchmarks/bench_kernels.py [--batch N] [--reps R]
"""

import argparse
import time

import numpy as np

from polaris import backend, sweep
from polaris.gf import GF
from polaris.spaces import symplectic_space


def bench_one(space, batch, reps):
    tables = sweep.space_tables(space)
    args = sweep._kernel_args(tables)
    elements = sweep.sample_elements(space, batch, seed=2)
    results = {}
    for name, kern in sorted(backend.available_backends().items()):
        kern.census_chunk(elements[:64], *args)  # warm up
        best = float("inf")
        for _ in range(reps):
            t0 = time.perf_counter()
            out = kern.census_chunk(elements, *args)
            best = min(best, time.perf_counter() - t0)
        results[name] = (best, out)
    names = list(results)
    for name in names:
        best, _ = results[name]
        print(f"  {name:10s} {batch / best:12,.0f} elements/s   ({best:.3f}s per batch of {batch})")
    if len(names) == 2:
        (t_a, out_a), (t_b, out_b) = results[names[0]], results[names[1]]
        agree = np.array_equal(out_a[0], out_b[0]) and np.array_equal(out_a[1], out_b[1])
        print(f"  backends agree on every element: {agree}")
        print(f"  speedup {names[0]} over {names[1]}: {t_b / t_a:.2f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--batch", type=int, default=4096)
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    print(f"available backends: {sorted(backend.available_backends())} (default {backend.BACKEND_NAME})")
    for n, q in ((2, 3), (3, 2)):
        space = symplectic_space(n, GF(q))
        print(f"rank {n}, GF({q}) ({space.num_points} points):")
        bench_one(space, args.batch, args.reps)


if __name__ == "__main__":
    main()
