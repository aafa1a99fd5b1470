"""Exhaustive property checkers, counter-example instances and bound harnesses.

Checkers scan every relevant subset (pair) and stop at the first
violation, reporting it as a witness. Enumeration order is fixed, so the
witness is the same whichever kernel backend runs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from . import kernels
from .bits import mask_of, members
from .costs import (
    CostModel,
    ModularCost,
    ModularWeights,
    PolyOfG,
    SetFunction,
    TableCost,
    unit_cost,
)
from .errors import CapExceededError, ConfigurationError, PreconditionError
from .instance import TOL, Instance, PolicyTree, worst_case_value
from .policies import (
    COMBINED,
    PI1,
    PI2,
    PI2_FIRST,
    brute_force_optimal,
    materialize_policy_tree,
)
from .utilities import CoverageUtility, ModularUtility, UtilityModel, VersionSpaceUtility

BOUND = 0.5 * (1 - 1 / math.e)
CHECK_MAX_ITEMS = 8
POINTWISE_MAX_REALIZATIONS = 4096

PASS, FAIL, SAMPLED_PASS = "pass", "fail", "sampled-pass"


@dataclass
class CheckReport:
    property: str
    verdict: str
    witness: dict | None = None
    pairs_checked: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_dict(self) -> dict:
        return asdict(self)


def _names(mask: int, labels: Sequence[str] | None) -> list:
    idx = list(members(mask))
    return [labels[i] for i in idx] if labels else idx


def _label(i: int, labels):
    return labels[i] if labels else i


def _as_table(g, n: int | None = None) -> tuple[np.ndarray, int]:
    if isinstance(g, SetFunction):
        return g.table(), g.n_items
    arr = np.asarray(g, dtype=np.float64)
    size = arr.shape[0]
    bits = size.bit_length() - 1
    if size != 1 << bits or (n is not None and n != bits):
        raise ConfigurationError("set-function table length must be 2**n_items")
    return arr, bits


def _as_callable(g) -> Callable[[int], float]:
    if callable(g):
        return g
    arr = np.asarray(g, dtype=np.float64)
    return lambda s: float(arr[s])


def _n_of(g) -> int:
    if isinstance(g, SetFunction):
        return g.n_items
    return _as_table(g)[1]


def _violates(lhs: float, rhs: float, tol: float) -> bool:
    return lhs < rhs - tol * max(1.0, abs(lhs), abs(rhs))


# -- set-function checkers ---------------------------------------------------


def check_cost_sensitive_submodularity(g, c, tol: float = TOL, labels=None,
                                       max_items: int = CHECK_MAX_ITEMS,
                                       sample: int | None = None, seed: int = 0,
                                       name: str = "cost-sensitive submodularity") -> CheckReport:
    """Diminishing returns of ``g`` per unit of cost increment of ``c``.

    Uses the cross-multiplied form gain_A * dc_B >= gain_B * dc_A for all
    A subset of B and x outside B. Above ``max_items`` items a seeded
    sample of ``sample`` triples is checked instead (verdict
    ``sampled-pass`` at best).
    """
    n = _n_of(g)
    if _n_of(c) != n:
        raise ConfigurationError("g and c are defined over different item sets")
    if n > max_items:
        if sample is None:
            raise CapExceededError(f"{n} items exceeds the exhaustive cap {max_items}; request sampling")
        return _sampled_cs_check(_as_callable(g), _as_callable(c), n, tol, labels, sample, seed, name)
    gt, _ = _as_table(g)
    ct, _ = _as_table(c)
    x, B, A, checked = kernels.cs_submodular_witness(gt, ct, n, tol)
    if x < 0:
        return CheckReport(name, PASS, None, checked)
    return CheckReport(name, FAIL, _cs_witness(gt, ct, A, B, x, labels), checked)


def _cs_witness(gt, ct, A, B, x, labels) -> dict:
    bit = 1 << x
    gain_a, gain_b = gt[A | bit] - gt[A], gt[B | bit] - gt[B]
    dc_a, dc_b = ct[A | bit] - ct[A], ct[B | bit] - ct[B]
    return {
        "A": _names(A, labels), "B": _names(B, labels), "x": _label(x, labels),
        "gain_A": float(gain_a), "cost_increment_A": float(dc_a),
        "gain_B": float(gain_b), "cost_increment_B": float(dc_b),
        "ratio_A": float(gain_a / dc_a) if dc_a else math.inf,
        "ratio_B": float(gain_b / dc_b) if dc_b else math.inf,
        "masks": {"A": int(A), "B": int(B), "x": int(x)},
    }


def _sampled_cs_check(g, c, n, tol, labels, sample, seed, name):
    rng = np.random.default_rng(seed)
    for k in range(1, sample + 1):
        x = int(rng.integers(n))
        others = [i for i in range(n) if i != x]
        inB = rng.random(len(others)) < 0.5
        inA = inB & (rng.random(len(others)) < 0.5)
        B = mask_of(o for o, keep in zip(others, inB) if keep)
        A = mask_of(o for o, keep in zip(others, inA) if keep)
        bit = 1 << x
        gain_a, gain_b = g(A | bit) - g(A), g(B | bit) - g(B)
        dc_a, dc_b = c(A | bit) - c(A), c(B | bit) - c(B)
        if _violates(gain_a * dc_b, gain_b * dc_a, tol):
            table = {s: v for s, v in ((A, g(A)), (A | bit, g(A | bit)), (B, g(B)), (B | bit, g(B | bit)))}
            ctab = {s: v for s, v in ((A, c(A)), (A | bit, c(A | bit)), (B, c(B)), (B | bit, c(B | bit)))}
            return CheckReport(name, FAIL, _cs_witness(table, ctab, A, B, x, labels), k)
    return CheckReport(name, SAMPLED_PASS, None, sample, {"note": "sampled, not proven", "seed": seed})


def check_submodularity(g, tol: float = TOL, labels=None, max_items: int = CHECK_MAX_ITEMS,
                        sample: int | None = None, seed: int = 0) -> CheckReport:
    """Classical diminishing returns.

    Exhaustive mode checks the local form g(A+x) - g(A) >= g(A+x+y) - g(A+y),
    which is equivalent to the A-subset-B form and reports the violation as
    the chain A, then y, then x (B = A + y). Sampling falls back to the
    cost-sensitive checker under the cardinality cost.
    """
    n = _n_of(g)
    if n > max_items:
        return check_cost_sensitive_submodularity(g, unit_cost(n), tol, labels, max_items, sample, seed,
                                                  name="submodularity")
    gt, _ = _as_table(g)
    x, B, A, checked = kernels.submodular_witness(gt, n, tol)
    if x < 0:
        return CheckReport("submodularity", PASS, None, checked)
    return CheckReport("submodularity", FAIL, _cs_witness(gt, unit_cost(n).table(), A, B, x, labels), checked)


def check_monotone(g, tol: float = TOL, labels=None) -> CheckReport:
    gt, n = _as_table(g)
    A, x, checked = kernels.monotone_witness(gt, n, tol)
    if x < 0:
        return CheckReport("monotonicity", PASS, None, checked)
    return CheckReport("monotonicity", FAIL, {
        "A": _names(A, labels), "x": _label(x, labels),
        "value_A": float(gt[A]), "value_A_plus_x": float(gt[A | 1 << x]),
        "masks": {"A": int(A), "x": int(x)},
    }, checked)


_AXIOMS = {1: "zero empty cost", 2: "positivity", 3: "strict monotonicity", 4: "triangle inequality"}


def check_cost_axioms(c: CostModel, tol: float = TOL, labels=None,
                      max_items: int = CHECK_MAX_ITEMS, sample: int | None = None,
                      seed: int = 0) -> CheckReport:
    """c(empty) = 0, c(S) > 0 otherwise, strictly increasing steps, c(A | B) <= c(A) + c(B)."""
    n = c.n_items
    if n > max_items:
        if sample is None:
            raise CapExceededError(f"{n} items exceeds the exhaustive cap {max_items}; request sampling")
        return _sampled_axioms(c, n, tol, labels, sample, seed)
    ct = c.table()
    code, a, b, checked = kernels.cost_axiom_witness(ct, n, tol)
    if code == 0:
        return CheckReport("cost axioms", PASS, None, checked)
    return CheckReport("cost axioms", FAIL, _axiom_witness(c, code, a, b, labels), checked)


def _axiom_witness(c, code, a, b, labels) -> dict:
    w: dict[str, Any] = {"axiom": _AXIOMS[code]}
    if code == 1:
        w["cost_empty"] = c(0)
    elif code == 2:
        w.update(S=_names(a, labels), cost=c(a))
    elif code == 3:
        w.update(A=_names(a, labels), x=_label(b, labels), cost_increment=c(a | 1 << b) - c(a))
    else:
        w.update(A=_names(a, labels), B=_names(b, labels),
                 cost_union=c(a | b), cost_sum=c(a) + c(b))
    w["masks"] = {"a": int(a), "b": int(b)}
    return w


def _sampled_axioms(c, n, tol, labels, sample, seed):
    rng = np.random.default_rng(seed)
    full = 1 << n
    if abs(c(0)) > tol:
        return CheckReport("cost axioms", FAIL, _axiom_witness(c, 1, 0, 0, labels), 1)
    for k in range(1, sample + 1):
        A = int(rng.integers(full))
        B = int(rng.integers(full))
        x = int(rng.integers(n))
        if A and c(A) <= tol:
            return CheckReport("cost axioms", FAIL, _axiom_witness(c, 2, A, 0, labels), k)
        if not A >> x & 1 and c(A | 1 << x) - c(A) <= tol:
            return CheckReport("cost axioms", FAIL, _axiom_witness(c, 3, A, x, labels), k)
        if c(A | B) > c(A) + c(B) + tol * max(1.0, c(A | B)):
            return CheckReport("cost axioms", FAIL, _axiom_witness(c, 4, A, B, labels), k)
    return CheckReport("cost axioms", SAMPLED_PASS, None, sample, {"note": "sampled, not proven", "seed": seed})


# -- utility checkers --------------------------------------------------------


def _realizations(n, m, cap):
    total = m**n
    if total > cap:
        raise CapExceededError(f"{total} realizations exceeds the cap {cap}")
    return itertools.product(range(m), repeat=n)


def check_minimal_dependency(u: UtilityModel, tol: float = TOL,
                             cap: int = POINTWISE_MAX_REALIZATIONS, labels=None,
                             tables: dict | None = None, max_items: int = CHECK_MAX_ITEMS) -> CheckReport:
    """f(S, h) == f(S, h') whenever h and h' agree on S."""
    n, m = u.n_items, u.n_states
    if n > max_items:
        raise CapExceededError(f"{n} items exceeds the exhaustive cap {max_items}")
    tables = tables if tables is not None else {h: _realized_table(u, h) for h in _realizations(n, m, cap)}
    checked = 0
    for S in range(1 << n):
        idx = list(members(S))
        first: dict[tuple, tuple] = {}
        for h, table in tables.items():
            key = tuple(h[i] for i in idx)
            checked += 1
            if key not in first:
                first[key] = (h, table[S])
                continue
            h0, v0 = first[key]
            v = table[S]
            if abs(v - v0) > tol * max(1.0, abs(v), abs(v0)):
                return CheckReport("minimal dependency", FAIL, {
                    "S": _names(S, labels), "h": list(h0), "h_prime": list(h),
                    "value_h": float(v0), "value_h_prime": float(v), "masks": {"S": S},
                }, checked)
    return CheckReport("minimal dependency", PASS, None, checked)


def _realized_table(u: UtilityModel, h) -> np.ndarray:
    return np.array([u.value(s, h) for s in range(1 << u.n_items)], dtype=np.float64)


def check_pointwise_properties(u: UtilityModel, c: CostModel, tol: float = TOL,
                               cap: int = POINTWISE_MAX_REALIZATIONS, labels=None,
                               max_items: int = CHECK_MAX_ITEMS) -> CheckReport:
    """Monotonicity and cost-sensitive submodularity of every f_h, plus minimal dependency."""
    n, m = u.n_items, u.n_states
    if n > max_items:
        raise CapExceededError(f"{n} items exceeds the exhaustive cap {max_items}")
    if c.n_items != n:
        raise ConfigurationError("utility and cost are defined over different item sets")
    tables = {h: _realized_table(u, h) for h in _realizations(n, m, cap)}
    ct = c.table()
    checked = 0
    details = {}
    for h, table in tables.items():
        mono = check_monotone(table, tol, labels)
        checked += mono.pairs_checked
        if not mono.passed:
            mono.witness["h"] = list(h)
            return CheckReport("pointwise properties", FAIL, {"failed": "pointwise monotonicity", **mono.witness},
                               checked, {"pointwise monotonicity": FAIL})
    details["pointwise monotonicity"] = PASS
    for h, table in tables.items():
        cs = check_cost_sensitive_submodularity(table, ct, tol, labels, max_items=max_items)
        checked += cs.pairs_checked
        if not cs.passed:
            cs.witness["h"] = list(h)
            details["pointwise cost-sensitive submodularity"] = FAIL
            return CheckReport("pointwise properties", FAIL,
                               {"failed": "pointwise cost-sensitive submodularity", **cs.witness},
                               checked, details)
    details["pointwise cost-sensitive submodularity"] = PASS
    md = check_minimal_dependency(u, tol, cap, labels, tables, max_items)
    checked += md.pairs_checked
    details["minimal dependency"] = md.verdict
    if not md.passed:
        return CheckReport("pointwise properties", FAIL, {"failed": "minimal dependency", **md.witness},
                           checked, details)
    return CheckReport("pointwise properties", PASS, None, checked, details)


def check_instance(inst: Instance, tol: float = TOL, max_items: int = CHECK_MAX_ITEMS) -> list[CheckReport]:
    labels = list(inst.items)
    return [
        check_cost_axioms(inst.cost, tol, labels, max_items=max_items),
        check_pointwise_properties(inst.utility, inst.cost, tol, labels=labels, max_items=max_items),
    ]


def instance_passes(inst: Instance, tol: float = TOL, max_items: int = CHECK_MAX_ITEMS) -> bool:
    return all(r.passed for r in check_instance(inst, tol, max_items))


# -- counter-example instances -------------------------------------------------


def gen_counterexample_thm2(p: float) -> Instance:
    """Two single-state items: value 1 at cost 1 and value p at cost p + 1; budget p + 1.

    The cost-average policy takes the cheap item and can no longer afford
    the valuable one.
    """
    if not p > 1:
        raise PreconditionError("p must exceed 1")
    return Instance(("x1", "x2"), ("0",), ModularUtility([[1.0], [float(p)]]),
                    ModularCost([1.0, p + 1.0]), p + 1.0, name=f"thm2-p{p:g}")


def gen_counterexample_thm3(n: int) -> Instance:
    """Item x0 of value 2 and cost n, plus n unit items; budget n.

    The cost-insensitive policy spends the whole budget on x0.
    """
    if n < 2 or int(n) != n:
        raise PreconditionError("n must be an integer >= 2")
    n = int(n)
    items = tuple(f"x{i}" for i in range(n + 1))
    w = [[2.0]] + [[1.0]] * n
    return Instance(items, ("0",), ModularUtility(w), ModularCost([float(n)] + [1.0] * n), float(n),
                    name=f"thm3-n{n}")


def thm3_unit_chain(inst: Instance, budget: float) -> PolicyTree:
    """Non-adaptive tree taking unit items x1, x2, ... while they fit in ``budget``."""
    k = int(math.floor(budget + TOL))
    k = min(k, inst.n_items - 1)
    return PolicyTree.chain(range(1, k + 1), inst.n_states)


def ns3_cost() -> TableCost:
    """Three-item cost that satisfies the triangle inequality but is not submodular."""
    v = {
        (): 0.0, (0,): 1.0, (1,): 1.0, (2,): 1.0,
        (0, 1): 2.0, (0, 2): 1.5, (1, 2): 1.5, (0, 1, 2): 2.5,
    }
    return TableCost(3, {mask_of(k): val for k, val in v.items()})


# -- ratio harness -----------------------------------------------------------


@dataclass
class RatioReport:
    instance_id: str
    policy: str
    reference: str
    value_policy: float
    value_optimal: float
    ratio: float
    bound: float
    satisfied: bool
    applicable: bool
    claim: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        if not math.isfinite(self.ratio):
            d["ratio"] = None   # positive value against a zero optimum; JSON has no infinity
        return d


BEST_OF_TWO = "best_of_two"
BEST_OF_TWO_FIRST = "best_of_two_first"
HARNESS_POLICIES = (PI1, PI2, COMBINED, PI2_FIRST, BEST_OF_TWO, BEST_OF_TWO_FIRST)


def _claim(inst: Instance, policy: str, reference: str) -> str:
    if reference == "full" and policy == BEST_OF_TWO:
        return "best of pi1/pi2 vs optimum"
    if reference == "full" and policy == BEST_OF_TWO_FIRST:
        return "best of pi1/first pick of pi2 vs optimum"
    if reference == "half" and policy == COMBINED:
        return "combined half-budget policy vs half-budget optimum"
    if (reference == "half" and policy == PI1 and isinstance(inst.utility, ModularUtility)
            and isinstance(inst.cost, ModularCost)):
        return "pi1 at full budget vs half-budget optimum (modular utility and cost)"
    return ""


def ratio(value_policy: float, value_optimal: float) -> float:
    if value_optimal > 0:
        return value_policy / value_optimal
    return 1.0 if value_policy <= 0 else math.inf


class _Evaluator:
    """Caches trees and exact values for one instance."""

    def __init__(self, inst: Instance, optimal_trees: dict | None = None, **caps):
        self.inst = inst
        self.caps = caps
        self.optimal_trees = optimal_trees or {}
        self._values: dict = {}

    def policy_value(self, policy: str) -> float:
        if policy not in self._values:
            if policy == BEST_OF_TWO:
                v = max(self.policy_value(PI1), self.policy_value(PI2))
            elif policy == BEST_OF_TWO_FIRST:
                v = max(self.policy_value(PI1), self.policy_value(PI2_FIRST))
            else:
                tree = materialize_policy_tree(self.inst, policy)
                v = worst_case_value(self.inst, tree).worst_value
            self._values[policy] = v
        return self._values[policy]

    def optimal_value(self, reference: str) -> float:
        key = ("opt", reference)
        if key not in self._values:
            budget = self.inst.budget if reference == "full" else self.inst.budget / 2
            if reference in self.optimal_trees:
                v = worst_case_value(self.inst, self.optimal_trees[reference]).worst_value
            else:
                v = brute_force_optimal(self.inst, budget, **self.caps)[1]
            self._values[key] = v
        return self._values[key]


def ratio_harness(inst: Instance, policy: str, reference: str = "full",
                  checks_passed: bool | None = None, optimal_trees: dict | None = None,
                  evaluator: _Evaluator | None = None, **caps) -> RatioReport:
    """Exact worst-case ratio of ``policy`` to the optimum at the reference budget.

    ``reference`` is ``"full"`` (budget K) or ``"half"`` (K/2). The bound is
    only claimed for instances passing every checker and for the
    (policy, reference) pairs that carry a guarantee; other rows are
    reported with ``applicable=False``. ``optimal_trees`` may supply an
    explicit optimal tree per reference when brute force is out of reach.
    """
    if policy not in HARNESS_POLICIES:
        raise PreconditionError(f"unknown policy kind {policy!r}")
    if reference not in ("full", "half"):
        raise PreconditionError("reference must be 'full' or 'half'")
    ev = evaluator or _Evaluator(inst, optimal_trees, **caps)
    vp = ev.policy_value(policy)
    vo = ev.optimal_value(reference)
    r = ratio(vp, vo)
    claim = _claim(inst, policy, reference)
    if checks_passed is None and claim:
        checks_passed = instance_passes(inst)
    applicable = bool(claim) and bool(checks_passed)
    return RatioReport(inst.name, policy, reference, vp, vo, r, BOUND, r > BOUND, applicable, claim)


def bound_reports(inst: Instance, checks_passed: bool | None = None, **caps) -> list[RatioReport]:
    """All guaranteed comparisons for one instance."""
    if checks_passed is None:
        checks_passed = instance_passes(inst)
    ev = _Evaluator(inst, **caps)
    rows = [
        ratio_harness(inst, BEST_OF_TWO, "full", checks_passed, evaluator=ev),
        ratio_harness(inst, BEST_OF_TWO_FIRST, "full", checks_passed, evaluator=ev),
        ratio_harness(inst, COMBINED, "half", checks_passed, evaluator=ev),
        ratio_harness(inst, PI1, "half", checks_passed, evaluator=ev),
    ]
    return rows


# -- random instances for fuzzing --------------------------------------------


FAMILIES = ("modular/modular", "scaled/poly", "vsr/modular", "vsr/poly", "coverage/modular", "modular/poly",
            "knapsack/modular")


def _grid(rng, lo, hi, step=0.5, size=None):
    k = rng.integers(int(round(lo / step)), int(round(hi / step)) + 1, size=size)
    return k * step


def random_instance(rng: np.random.Generator, max_items: int = 5, max_states: int = 2,
                    family: str | None = None, name: str = "") -> Instance:
    """One random small instance; it may fail the checkers (callers filter)."""
    n = int(rng.integers(2, max_items + 1))
    m = int(rng.integers(1, max_states + 1))
    family = family or FAMILIES[int(rng.integers(len(FAMILIES)))]
    ufam, cfam = family.split("/")
    if ufam == "knapsack":
        return _knapsack_instance(rng, n, m, name or family)
    if cfam == "modular":
        cost: CostModel = ModularCost(_grid(rng, 0.5, 4.0, size=n).tolist())
        g = None
    else:
        g = ModularWeights(_grid(rng, 0.5, 2.0, size=n).tolist())
        coeffs = _grid(rng, 0.0, 1.0, size=int(rng.integers(1, 4))).tolist()
        if sum(coeffs) == 0:
            coeffs[0] = 0.5
        cost = PolyOfG(coeffs, g)
    if ufam == "modular":
        utility: UtilityModel = ModularUtility(_grid(rng, 0.0, 5.0, size=(n, m)))
    elif ufam == "scaled":
        scale = _grid(rng, 0.0, 2.0, size=m)
        utility = ModularUtility(np.outer(g.weights, scale))
    elif ufam == "vsr":
        labelings = list(itertools.product(range(m), repeat=n))
        k = int(rng.integers(1, min(8, len(labelings)) + 1))
        pick = rng.choice(len(labelings), size=k, replace=False)
        weights = _grid(rng, 0.5, 2.0, size=k)
        utility = VersionSpaceUtility([labelings[i] for i in sorted(pick)], weights / weights.sum(), m)
    elif ufam == "coverage":
        universe = 6
        regions = [[sorted(rng.choice(universe, size=int(rng.integers(0, 4)), replace=False).tolist())
                    for _ in range(m)] for _ in range(n)]
        utility = CoverageUtility(universe, regions)
    else:
        raise ConfigurationError(f"unknown utility family {ufam!r}")
    singles = [cost(1 << i) for i in range(n)]
    total = cost((1 << n) - 1)
    lo, hi = min(singles), total
    budget = float(_grid(rng, max(0.5, math.ceil(lo * 2) / 2), max(0.5, math.ceil(hi * 2) / 2)))
    items = tuple(f"x{i + 1}" for i in range(n))
    states = tuple(str(y) for y in range(m))
    return Instance(items, states, utility, cost, budget, name=name or family)


def _knapsack_instance(rng, n, m, name) -> Instance:
    """One expensive valuable item against cheap ones; the budget fits the cheap ones.

    This is where the two greedy rules disagree, so the fuzz suites see
    instances on which neither is optimal.
    """
    small = _grid(rng, 0.5, 2.0, size=n - 1)
    budget = float(small.sum())
    big = float(max(0.5, budget - _grid(rng, 0.0, 1.0)))
    values = np.concatenate([[big * _grid(rng, 0.75, 2.0)], small * _grid(rng, 0.5, 2.0, size=n - 1)])
    spread = 1.0 + _grid(rng, 0.0, 0.5, step=0.25, size=(n, m))
    spread[:, 0] = 1.0
    utility = ModularUtility(values[:, None] * spread)
    items = tuple(f"x{i + 1}" for i in range(n))
    states = tuple(str(y) for y in range(m))
    return Instance(items, states, utility, ModularCost([big, *small.tolist()]), budget, name=name)


@dataclass
class FuzzStats:
    accepted: int = 0
    rejected: int = 0
    by_family: dict = field(default_factory=dict)

    @property
    def rejection_rate(self) -> float:
        total = self.accepted + self.rejected
        return self.rejected / total if total else 0.0


def random_checked_instances(count: int, seed: int, max_items: int = 5, max_states: int = 2,
                             families: Sequence[str] = FAMILIES,
                             stats: FuzzStats | None = None) -> Iterator[Instance]:
    """Yield ``count`` random instances that pass every checker."""
    rng = np.random.default_rng(seed)
    stats = stats if stats is not None else FuzzStats()
    while stats.accepted < count:
        family = families[int(rng.integers(len(families)))]
        inst = random_instance(rng, max_items, max_states, family, name=f"rand-{seed}-{stats.accepted}-{family}")
        ok = instance_passes(inst)
        acc, rej = stats.by_family.get(family, (0, 0))
        stats.by_family[family] = (acc + ok, rej + (not ok))
        if ok:
            stats.accepted += 1
            yield inst
        else:
            stats.rejected += 1
