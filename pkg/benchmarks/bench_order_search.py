#!/usr/bin/env python3
"""Benchmark the two optimal-search lanes (numba kernel vs pure Python).

The full search enumerates 3^n bipartition candidates, so the lanes
separate quickly with n.  Run from the repository root:

    python3 benchmarks/bench_order_search.py [--max-n 14] [--repeats 3]

The numba lane is compiled once before timing (the cache also persists
across runs).  Both lanes return identical trees; the benchmark asserts it.
"""

import argparse
import random
import time

from ttc import compile_network, nets, optimal_order_full
from ttc.testing import random_network


def wall(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=14)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    mera = compile_network(nets.binary_mera_like(), 1)
    optimal_order_full(mera)  # compile the kernel outside the timings

    rng = random.Random(2024)
    cases = [("mera-11", mera)]
    for n in range(8, args.max_n + 1, 2):
        cases.append((f"random-{n}", random_network(rng, n, min_dim=2,
                                                    max_dim=4, max_open=2)))

    print(f"{'case':<12} {'n':>3} {'numba':>12} {'python':>12} {'speedup':>9}")
    for name, net in cases:
        t_numba = wall(lambda: optimal_order_full(net, kernel="numba"),
                       args.repeats)
        t_python = wall(lambda: optimal_order_full(net, kernel="python"),
                        args.repeats)
        a = optimal_order_full(net, kernel="numba")
        b = optimal_order_full(net, kernel="python")
        assert a == b, f"lane mismatch on {name}"
        print(f"{name:<12} {net.n:>3} {t_numba:>11.4f}s {t_python:>11.4f}s "
              f"{t_python / t_numba:>8.1f}x")


if __name__ == "__main__":
    main()
