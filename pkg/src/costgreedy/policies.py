"""Greedy policies, their tree forms, and the exact optimal policy.

``pi1`` is the cost-average greedy policy (gain per unit of cost
increment), ``pi2`` the cost-insensitive one (gain only). Both follow the
same loop: every item is considered exactly once, in order of the
criterion; it is observed if still affordable and discarded either way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .errors import CapExceededError, CostModelViolation, PreconditionError
from .instance import (
    TOL,
    Instance,
    PartialRealization,
    PolicyNode,
    PolicyTree,
    Realization,
    marginal_gain_delta,
    worst_case_value,
)
from .utilities import require_minimal_dependency

PI1 = "pi1"
PI2 = "pi2"
COMBINED = "combined"
PI2_FIRST = "pi2_first"
POLICY_KINDS = (PI1, PI2, COMBINED, PI2_FIRST)

DEFAULT_NODE_CAP = 2**20
BRUTE_FORCE_MAX_ITEMS = 6
BRUTE_FORCE_MAX_STATES = 3

Score = Callable[[Instance, int, PartialRealization], float]


def gain_score(inst: Instance, x: int, D: PartialRealization) -> float:
    return marginal_gain_delta(inst, x, D)


def ratio_score(inst: Instance, x: int, D: PartialRealization) -> float:
    dc = inst.cost.increment(x, D.mask)
    if dc <= TOL:
        raise CostModelViolation(
            f"cost increment of {inst.items[x]} is {dc}; the cost is not strictly monotone"
        )
    return marginal_gain_delta(inst, x, D) / dc


SCORES: dict[str, Score] = {PI1: ratio_score, PI2: gain_score}


def argmax_lowest(values) -> int:
    """Index of the maximum; near-ties (within TOL) go to the lowest index."""
    best = max(values)
    cut = best - TOL * max(1.0, abs(best))
    for i, v in enumerate(values):
        if v >= cut:
            return i
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Decision:
    item: int
    score: float
    affordable: bool
    observed_state: int | None = None

    @property
    def selected(self) -> bool:
        return self.affordable


@dataclass(frozen=True)
class PolicyRunTrace:
    policy: str
    budget: float
    decisions: tuple[Decision, ...]
    final_selected: frozenset[int]
    final_cost: float
    observations: PartialRealization = field(default_factory=PartialRealization)

    @property
    def selected_order(self) -> list[int]:
        return [d.item for d in self.decisions if d.selected]


@dataclass(frozen=True)
class CombinedRunResult:
    s1: frozenset[int]
    s2: frozenset[int]
    union: frozenset[int]
    value_on_realization: float
    first: PolicyRunTrace
    second: PolicyRunTrace


def _next_pick(inst: Instance, score: Score, D: PartialRealization, U: tuple[int, ...],
               budget: float):
    """Advance the loop to the next affordable pick.

    Returns ``(item or None, remaining U, decisions made)``; skipped
    (unaffordable) items are recorded as decisions too.
    """
    decisions = []
    mask = D.mask
    U = list(U)
    while U:
        scores = [score(inst, x, D) for x in U]
        k = argmax_lowest(scores)
        x = U.pop(k)
        if inst.cost(mask | (1 << x)) <= budget + TOL:
            decisions.append(Decision(x, scores[k], True))
            return x, tuple(U), decisions
        decisions.append(Decision(x, scores[k], False))
    return None, (), decisions


def _run(inst: Instance, h: Realization, budget: float, policy: str) -> PolicyRunTrace:
    require_minimal_dependency(inst.utility)
    if not budget > 0:
        raise PreconditionError("budget must be positive")
    if len(h) != inst.n_items:
        raise PreconditionError("realization length does not match the item count")
    score = SCORES[policy]
    D = PartialRealization()
    U = tuple(range(inst.n_items))
    decisions: list[Decision] = []
    while U:
        x, U, made = _next_pick(inst, score, D, U, budget)
        if x is None:
            decisions.extend(made)
            break
        last = made[-1]
        made[-1] = Decision(last.item, last.score, True, h[x])
        decisions.extend(made)
        D = D.extend(x, h[x])
    return PolicyRunTrace(policy, budget, tuple(decisions), D.selected, inst.cost(D.mask), D)


def run_greedy_cost_average(inst: Instance, h: Realization, budget: float | None = None) -> PolicyRunTrace:
    return _run(inst, h, inst.budget if budget is None else budget, PI1)


def run_greedy_cost_insensitive(inst: Instance, h: Realization, budget: float | None = None) -> PolicyRunTrace:
    return _run(inst, h, inst.budget if budget is None else budget, PI2)


def run_combined_half(inst: Instance, h: Realization) -> CombinedRunResult:
    """pi1 on half the budget, then pi2 from scratch on the other half.

    Items picked in both halves are paid for in each half's accounting but
    observed once; the value is f(S1 | S2) under ``h``. The union fits the
    full budget only if the cost satisfies the triangle inequality.
    """
    half = inst.budget / 2
    first = run_greedy_cost_average(inst, h, half)
    second = run_greedy_cost_insensitive(inst, h, half)
    union = first.final_selected | second.final_selected
    mask = sum(1 << x for x in union)
    return CombinedRunResult(
        first.final_selected, second.final_selected, frozenset(union), inst.f(mask, h), first, second
    )


def _unroll(inst, score, D, U, budget, known, after_leaf, counter, cap):
    x, U_rest, _ = _next_pick(inst, score, D, U, budget)
    if x is None:
        return after_leaf(known)
    if x in known:
        # Already observed earlier on this path (second half of the combined policy).
        return _unroll(inst, score, D.extend(x, known[x]), U_rest, budget, known, after_leaf, counter, cap)
    counter[0] += 1
    if counter[0] > cap:
        raise CapExceededError(f"policy tree exceeds {cap} nodes")
    children = []
    for y in range(inst.n_states):
        children.append(
            _unroll(inst, score, D.extend(x, y), U_rest, budget, {**known, x: y}, after_leaf, counter, cap)
        )
    return PolicyNode(x, tuple(children))


def materialize_policy_tree(inst: Instance, strategy: str, budget: float | None = None,
                            cap: int = DEFAULT_NODE_CAP) -> PolicyTree:
    """Unroll an online policy into its full policy tree.

    For ``combined`` the budget is split in half; ``pi2_first`` stops
    after the first item pi2 would select.
    """
    require_minimal_dependency(inst.utility)
    budget = inst.budget if budget is None else budget
    counter = [0]
    start = PartialRealization()
    every = tuple(range(inst.n_items))

    def stop(known):
        return None

    if strategy in (PI1, PI2):
        return PolicyTree(_unroll(inst, SCORES[strategy], start, every, budget, {}, stop, counter, cap))
    if strategy == COMBINED:
        half = budget / 2

        def second_half(known):
            return _unroll(inst, gain_score, start, every, half, known, stop, counter, cap)

        return PolicyTree(_unroll(inst, ratio_score, start, every, half, {}, second_half, counter, cap))
    if strategy == PI2_FIRST:
        x, _, _ = _next_pick(inst, gain_score, start, every, budget)
        if x is None:
            return PolicyTree()
        return PolicyTree(PolicyNode(x, (None,) * inst.n_states))
    raise PreconditionError(f"unknown policy kind {strategy!r}")


def best_of_two(inst: Instance, budget: float | None = None) -> tuple[str, float]:
    """pi1 if its exact worst-case value is strictly larger, else pi2."""
    v1 = worst_case_value(inst, materialize_policy_tree(inst, PI1, budget)).worst_value
    v2 = worst_case_value(inst, materialize_policy_tree(inst, PI2, budget)).worst_value
    return (PI1, v1) if v1 > v2 else (PI2, v2)


# -- exact optimum -----------------------------------------------------------


def check_brute_force_cap(n_items: int, n_states: int,
                          max_items: int = BRUTE_FORCE_MAX_ITEMS,
                          max_states: int = BRUTE_FORCE_MAX_STATES) -> None:
    """The memo table has (|Y|+1)**|X| entries; allow up to the size of the cap corner."""
    limit = (max_states + 1) ** max_items
    size = (n_states + 1) ** n_items
    if size > limit:
        raise CapExceededError(
            f"brute force over {n_items} items x {n_states} states needs {size} table entries "
            f"> {limit} (cap {max_items} items x {max_states} states)"
        )


def _code_table(inst: Instance):
    """Utility of every partial realization, keyed by base-(m+1) code (cached on the utility)."""
    u = inst.utility
    cache = u.__dict__.setdefault("_code_table", {})
    key = (inst.n_items, inst.n_states)
    if key not in cache:
        n, m = key
        base = m + 1
        codes = np.arange(base**n, dtype=np.int64)
        powers = base ** np.arange(n, dtype=np.int64)
        digits = (codes[:, None] // powers[None, :]) % base
        observed = digits < m
        masks = (observed.astype(np.int64) << np.arange(n, dtype=np.int64)).sum(axis=1)
        states = np.where(observed, digits, -1)
        fvals = np.array([u.value(int(mk), row) for mk, row in zip(masks, states.tolist())])
        cache[key] = (fvals, masks)
    return cache[key]


def brute_force_optimal(inst: Instance, budget: float | None = None,
                        max_items: int = BRUTE_FORCE_MAX_ITEMS,
                        max_states: int = BRUTE_FORCE_MAX_STATES) -> tuple[PolicyTree, float]:
    """Optimal worst-case policy within ``budget`` and its value."""
    require_minimal_dependency(inst.utility)
    budget = inst.budget if budget is None else budget
    n, m = inst.n_items, inst.n_states
    check_brute_force_cap(n, m, max_items, max_states)
    fvals, masks = _code_table(inst)
    values, choice = kernels.optimal_values(fvals, masks, inst.cost.table(), n, m, float(budget), TOL)
    powers = [(m + 1) ** i for i in range(n)]

    def build(code):
        x = int(choice[code])
        if x < 0:
            return None
        return PolicyNode(x, tuple(build(code - (m - y) * powers[x]) for y in range(m)))

    root = (m + 1) ** n - 1
    return PolicyTree(build(root)), float(values[root])
