"""Compare the compiled and numpy subset-lattice transform backends.

Usage: python3 benchmarks/bench_subsetops.py [--m-max 20] [--repeats 5]

Times the in-place zeta transform (the mobius transform costs the same) on
dense int64 arrays of size 2^m, which is the hot path when inverting
union-reach observations back to exact access-set counts.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from infoseg import _subsetops_py

try:
    from infoseg import _subsetops
except ImportError:
    _subsetops = None


def bench(ops, m: int, repeats: int) -> float:
    rng = np.random.default_rng(7)
    base = rng.integers(0, 1000, size=2**m).astype(np.int64)
    best = float("inf")
    for _ in range(repeats):
        a = base.copy()
        t0 = time.perf_counter()
        ops.zeta_in_place(a, m)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m-max", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = [("numpy", _subsetops_py)]
    if _subsetops is not None:
        backends.insert(0, ("compiled", _subsetops))
    else:
        print("compiled extension not built; timing the numpy fallback only\n")

    header = f"{'m':>3} {'2^m':>9}" + "".join(f" {name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for m in range(8, args.m_max + 1, 2):
        times = [bench(ops, m, args.repeats) for _, ops in backends]
        row = f"{m:>3} {2**m:>9}" + "".join(f" {t * 1e3:>10.3f}ms" for t in times)
        if len(times) == 2:
            row += f" {times[1] / times[0]:>8.2f}x"
        print(row)


if __name__ == "__main__":
    main()
