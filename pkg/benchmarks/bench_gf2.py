"""Compare the compiled and pure-Python GF(2) echelon kernels.

Usage: python benchmarks/bench_gf2.py [--repeat N] [--seed S]

Workloads are random bitset matrices: dense square ones, and sparse wide
ones shaped like the bounded descent systems (a few unknowns per row).
"""

from __future__ import annotations

import argparse
import random
import sys
import timeit

from torellicore import _gf2_py

try:
    from torellicore import _gf2_ext
except ImportError:  # pragma: no cover - depends on build
    _gf2_ext = None


def dense(rng: random.Random, n: int) -> list:
    return [rng.getrandbits(n) for _ in range(n)]


def sparse(rng: random.Random, rows: int, cols: int, per_row: int = 4) -> list:
    out = []
    for _ in range(rows):
        v = 0
        for c in rng.sample(range(cols), per_row):
            v |= 1 << c
        out.append(v)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _gf2_ext is None:
        print("compiled kernel not built; reinstall with Cython available", file=sys.stderr)
        return 1
    rng = random.Random(args.seed)
    cases = [
        ("dense 128", dense(rng, 128)),
        ("dense 512", dense(rng, 512)),
        ("sparse 2000x1500", sparse(rng, 2000, 1500)),
        ("sparse 7600x4400", sparse(rng, 7600, 4400)),
    ]
    print(f"{'workload':<20}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}")
    for label, rows in cases:
        ref = _gf2_py.echelon(rows)
        assert _gf2_ext.echelon(rows) == ref, label
        tp = min(timeit.repeat(lambda: _gf2_py.echelon(rows), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: _gf2_ext.echelon(rows), number=1, repeat=args.repeat))
        print(f"{label:<20}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
