"""Compare the compiled kernels with the pure-Python fallback.

Run from the repository root after building the extension:

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each workload runs on both backends with identical inputs; outputs are
checked for equality before timings are reported.
"""
from __future__ import annotations

import argparse
import random
import statistics
import sys
import time

from tropism_forge import _pykernels, kernels
from tropism_forge.initial_solver import grid_equations
from tropism_forge.laurent import cyclic_system
from tropism_forge.linalg import Matrix, transform_from_tropisms
from tropism_forge.polytopes import initial_form_system, pretropism_cones
from tropism_forge.puiseux import reduce_initial_system

try:
    from tropism_forge import _ckernels
except ImportError:
    _ckernels = None

U9 = (1, 1, -2, 1, 1, -2, 1, 1, -2)
V9 = (0, 1, -1, 0, 1, -1, 0, 1, -1)


def dd_workload(seed=1, count=200):
    rng = random.Random(seed)
    cases = []
    for _ in range(count):
        n = rng.randint(3, 6)
        cons = [(tuple(rng.randint(-4, 4) for _ in range(n)), rng.random() < 0.2)
                for _ in range(rng.randint(10, 60))]
        lin = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        cases.append((lin, cons))

    def run(mod):
        return [mod.dd_intersect(lin, [], [], 0, cons) for lin, cons in cases]

    return run


def grid_workload(m=3):
    f = cyclic_system(9)
    w = tuple(a + b for a, b in zip(U9, V9))
    reduced = reduce_initial_system(initial_form_system(f, [w]), transform_from_tropisms(Matrix([U9, V9])))
    order, eqs, phi, _ = grid_equations(reduced, m)

    def run(mod):
        return mod.grid_search(order, reduced.nvars, eqs, phi, 0, m)

    return run


def cones_workload(n):
    system = cyclic_system(n)

    def run(mod):
        saved = kernels._impl
        kernels._impl = mod
        try:
            return [r.cone.canonical() for r in pretropism_cones(system, 1)]
        finally:
            kernels._impl = saved

    return run


def timed(fn, mod, repeat):
    out = None
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(mod)
        times.append(time.perf_counter() - t)
    return out, statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller cone workload")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; run: python setup.py build_ext --inplace", file=sys.stderr)
        return 1
    workloads = [
        ("double description, random cones", dd_workload(count=50 if args.quick else 200)),
        ("grid search, cyclic-9 initial system (3^7)", grid_workload(3)),
        ("grid search, cyclic-9 initial system (6^7)", grid_workload(6)),
        (f"pretropism cones, cyclic-{5 if args.quick else 7}", cones_workload(5 if args.quick else 7)),
    ]
    print(f"{'workload':<46}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for name, fn in workloads:
        a, tp = timed(fn, _pykernels, args.repeat)
        b, tc = timed(fn, _ckernels, args.repeat)
        if a != b:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        print(f"{name:<46}{tp:>10.3f}{tc:>10.3f}{tp / tc:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
