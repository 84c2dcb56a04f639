#!/usr/bin/env python3
"""Time the numba and numpy backends of the exhaustive kernels.

Usage:
    python benchmarks/bench_kernels.py [--users N] [--resources R] [--repeat K] [--seed S]

The numba column excludes compilation: each kernel is warmed up once before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cgrr import _kernels, build_graph
from cgrr.instances import identical_game, random_game


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--users", type=int, default=10)
    ap.add_argument("--resources", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    graph = build_graph("gnp_random", args.users, p=0.5, seed=args.seed)
    total = args.resources ** args.users
    general = random_game(rng, graph, args.resources, mode="per_user")
    identical = identical_game(rng, graph, args.resources)

    cases = {
        "nash_flags": lambda use: _kernels.nash_flags(general, 0, total, use),
        "fip_search": lambda use: _kernels.fip_search(identical, total, use),
        "ordinal_violation": lambda use: _kernels.ordinal_violation(identical, 0, total, use),
    }
    print(f"N={args.users} R={args.resources} profiles={total} edges={len(graph.edges)}")
    print(f"{'kernel':<20}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, fn in cases.items():
        fn(True)  # compile
        t_nb, out_nb = best_of(lambda: fn(True), args.repeat)
        t_np, out_np = best_of(lambda: fn(False), args.repeat)
        if name == "nash_flags":
            assert np.array_equal(out_nb, out_np)
        elif name == "fip_search":
            assert (len(out_nb[0]) == 0) == (len(out_np[0]) == 0)
        else:
            assert out_nb[0] == out_np[0]
        print(f"{name:<20}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
