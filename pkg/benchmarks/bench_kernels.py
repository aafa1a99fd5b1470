"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--items 10] [--repeat 3]

Inputs are chosen so every check passes, which forces a full scan.
"""

import argparse
import sys
import timeit

import numpy as np

from costgreedy import kernels
from costgreedy.costs import CoverageCount, ModularCost
from costgreedy.instance import Instance
from costgreedy.policies import _code_table
from costgreedy.utilities import ModularUtility

TOL = 1e-9


def cases(n_items: int, rng: np.random.Generator):
    g = CoverageCount([rng.choice(12, size=3, replace=False).tolist() for _ in range(n_items)]).table()
    c = ModularCost((rng.integers(1, 5, size=n_items) * 0.5).tolist()).table()
    n, m = 6, 3
    weights = rng.integers(1, 5, size=n) * 0.5
    inst = Instance(tuple(f"x{i}" for i in range(n)), tuple(map(str, range(m))),
                    ModularUtility(rng.integers(0, 6, size=(n, m))), ModularCost(weights.tolist()),
                    float(weights.sum() / 2))
    fvals, masks = _code_table(inst)
    costs = inst.cost.table()
    return {
        f"cost-sensitive check, {n_items} items": lambda k: k.cs_submodular_witness(g, c, n_items, TOL),
        f"submodularity check, {n_items} items": lambda k: k.submodular_witness(g, n_items, TOL),
        f"cost axioms, {n_items} items": lambda k: k.cost_axiom_witness(c, n_items, TOL),
        f"optimal policy table, {n} items x {m} states": lambda k: k.optimal_values(
            fvals, masks, costs, n, m, float(inst.budget), TOL),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--items", type=int, default=10, help="items for the set-function checks")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if kernels.compiled is None:
        print("compiled extension not available; build it with `pip install -e .`", file=sys.stderr)
        return 1
    print(f"{'kernel':<44}{'python ms':>11}{'cython ms':>11}{'speedup':>9}")
    for name, call in cases(args.items, np.random.default_rng(args.seed)).items():
        for a, b in zip(call(kernels.pure), call(kernels.compiled)):
            assert np.array_equal(a, b), name
        py = min(timeit.repeat(lambda: call(kernels.pure), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: call(kernels.compiled), number=1, repeat=args.repeat))
        print(f"{name:<44}{py * 1e3:>11.2f}{cy * 1e3:>11.3f}{py / cy:>8.0f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
