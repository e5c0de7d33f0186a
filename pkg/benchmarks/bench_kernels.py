"""Compare the compiled and pure-Python kernels.

Run from the repository root after installing the package:

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Each row times one kernel call per backend (best of ``--repeat``) and checks
that both backends agree.
"""

from __future__ import annotations

import argparse
import random
import sys
import timeit

from multialloc import kernels
from multialloc.game import omega_alternating
from multialloc.harness.generate import random_valuation
from multialloc.itemsets import full
from multialloc.mms import mms_partition


def _cases(seed: int):
    rng = random.Random(seed)
    for m in (8, 10, 12):
        v = random_valuation(rng, "xos", m)
        yield f"omega alt-p, xos, m={m}", lambda b, v=v, m=m: omega_alternating("p", full(m), v, backend=b).omega
    for m, n in ((10, 2), (10, 3), (12, 3), (16, 2)):
        v = random_valuation(rng, "additive", m)
        yield f"mms, additive, m={m}, n={n}", lambda b, v=v, m=m, n=n: mms_partition(full(m), v, n, backend=b)[0]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if "cython" not in kernels.available_backends():
        print("compiled core not available; only the Python kernels can run", file=sys.stderr)
        return 1

    print(f"{'case':32} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for name, run in _cases(args.seed):
        results = {}
        times = {}
        for backend in ("cython", "python"):
            results[backend] = run(backend)
            times[backend] = min(timeit.repeat(lambda: run(backend), number=1, repeat=args.repeat))
        if results["cython"] != results["python"]:
            print(f"{name}: backends disagree ({results['cython']} vs {results['python']})", file=sys.stderr)
            return 2
        c, p = times["cython"], times["python"]
        print(f"{name:32} {c:10.4f} {p:10.4f} {p / c if c else float('inf'):7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
