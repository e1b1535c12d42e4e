#!/usr/bin/env python3
"""Benchmark the compiled KL column kernel against the pure-Python one.

Builds full S_m tables with each backend and times a verification-style
workload (expansion rows over S(lam, mu) posets).  Run from a checkout:

    python benchmarks/bench_kl.py [--max-m 6]
"""
import argparse
import itertools
import time


def fresh_engine(kind):
    import ladderring.klengine as kle
    from ladderring import _klpure

    if kind == "pure":
        kle._kernel = _klpure
    else:
        from ladderring import _klcore
        kle._kernel = _klcore
    return kle.KLEngine()


def table_benchmark(kind, m):
    eng = fresh_engine(kind)
    t0 = time.perf_counter()
    eng.warm(m)
    dt = time.perf_counter() - t0
    cols, pairs = eng.stats()[m]
    return dt, cols, pairs


def row_benchmark(kind, m=6, rows=2000):
    """Expansion rows over S_m: the access pattern of the product sweeps."""
    eng = fresh_engine(kind)
    eng.warm(m)
    perms = list(itertools.permutations(range(1, m + 1)))
    t0 = time.perf_counter()
    n = 0
    for w in perms:
        for x in perms[:: max(1, len(perms) // (rows // len(perms) + 1))]:
            eng.at_one(x, w)
            n += 1
            if n >= rows:
                break
        if n >= rows:
            break
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-m", type=int, default=6)
    args = ap.parse_args()

    kinds = ["pure"]
    try:
        from ladderring import _klcore  # noqa: F401
        kinds.insert(0, "compiled")
    except ImportError:
        print("compiled kernel not built; benchmarking pure only")

    print(f"{'m':>3} {'backend':>9} {'full table':>12} {'columns':>8} {'pairs':>9}")
    for m in range(4, args.max_m + 1):
        for kind in kinds:
            dt, cols, pairs = table_benchmark(kind, m)
            print(f"{m:>3} {kind:>9} {dt:>10.3f}s {cols:>8} {pairs:>9}")

    for kind in kinds:
        dt = row_benchmark(kind)
        print(f"value-at-1 lookups, S_6, 2000 queries [{kind}]: {dt*1000:.1f} ms")


if __name__ == "__main__":
    main()
