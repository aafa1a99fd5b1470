"""Property-based checks of set-function and policy invariants."""

import itertools

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from costgreedy import verify
from costgreedy.bits import members
from costgreedy.costs import CoverageCount, ExpOfG, ModularCost, ModularWeights, PolyOfG, combine_costs
from costgreedy.instance import (
    PartialRealization,
    PolicyNode,
    PolicyTree,
    marginal_gain_delta,
    policy_cost,
    trace_policy,
    worst_case_value,
)
from costgreedy.policies import materialize_policy_tree

TOL = 1e-9
seeds = st.integers(0, 2**32 - 1)
fast = settings(max_examples=60, deadline=None)


def small_instance(seed, max_items=4, max_states=3):
    return verify.random_instance(np.random.default_rng(seed), max_items, max_states)


def inner_g(rng, n):
    if rng.random() < 0.5:
        return ModularWeights(rng.integers(0, 4, size=n) * 0.5)
    return CoverageCount([rng.choice(6, size=int(rng.integers(0, 4)), replace=False).tolist() for _ in range(n)])


def poly_cost(rng, g):
    coeffs = (rng.integers(0, 5, size=int(rng.integers(1, 4))) * 0.5).tolist()
    if not any(coeffs):
        coeffs[int(rng.integers(len(coeffs)))] = 1.0
    return PolyOfG(coeffs, g)


def exp_cost(rng, g):
    return ExpOfG(float(rng.uniform(0.05, 3.0)), g)


def members_subsets(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# -- utilities -------------------------------------------------------------------


@fast
@given(seeds)
def test_pointwise_monotone(seed):
    inst = small_instance(seed)
    n = inst.n_items
    for h in inst.realizations():
        values = [inst.f(s, h) for s in range(1 << n)]
        for b in range(1 << n):
            for a in members_subsets(b):
                assert values[a] <= values[b] + TOL


@fast
@given(seeds)
def test_minimal_dependency(seed):
    inst = small_instance(seed)
    n, m = inst.n_items, inst.n_states
    for s in range(1 << n):
        outside = [i for i in range(n) if not s >> i & 1]
        for inside in itertools.product(range(m), repeat=n - len(outside)):
            base = [0] * n
            for i, y in zip(members(s), inside):
                base[i] = y
            ref = inst.f(s, base)
            for rest in itertools.product(range(m), repeat=len(outside)):
                h = list(base)
                for i, y in zip(outside, rest):
                    h[i] = y
                assert inst.f(s, h) == ref


@fast
@given(seeds, st.data())
def test_worst_gain_lower_bounds_realized_gain(seed, data):
    inst = small_instance(seed)
    n, m = inst.n_items, inst.n_states
    order = data.draw(st.permutations(range(n)))
    k = data.draw(st.integers(0, n - 1))
    D = PartialRealization(tuple((x, data.draw(st.integers(0, m - 1))) for x in order[:k]))
    for x in order[k:]:
        delta = marginal_gain_delta(inst, x, D)
        for h in inst.realizations():
            if any(h[i] != y for i, y in D.observations):
                continue
            gain = inst.f(D.mask | 1 << x, h) - inst.f(D.mask, h)
            assert gain >= delta - TOL


# -- policy trees ----------------------------------------------------------------


def random_tree(rng, n, m, used=0):
    free = [i for i in range(n) if not used >> i & 1]
    if not free or rng.random() < 0.25:
        return None
    x = int(rng.choice(free))
    return PolicyNode(x, tuple(random_tree(rng, n, m, used | 1 << x) for _ in range(m)))


@fast
@given(seeds)
def test_path_cost_consistency(seed):
    inst = small_instance(seed)
    tree = PolicyTree(random_tree(np.random.default_rng(seed), inst.n_items, inst.n_states))
    expected = max(inst.cost(trace_policy(tree, h).mask) for h in inst.realizations())
    assert policy_cost(inst, tree) == expected


def extend_leaves(inst, node, used=0):
    if node is None:
        free = [i for i in range(inst.n_items) if not used >> i & 1]
        if not free:
            return None
        x = free[0]
        return PolicyNode(x, (None,) * inst.n_states)
    bit = 1 << node.item
    return PolicyNode(node.item, tuple(extend_leaves(inst, c, used | bit) for c in node.children))


@fast
@given(seeds, st.sampled_from(["pi1", "pi2"]))
def test_worst_value_monotone_under_extension(seed, strategy):
    inst = small_instance(seed)
    tree = materialize_policy_tree(inst, strategy, budget=inst.budget / 2)
    grown = PolicyTree(extend_leaves(inst, tree.root))
    before = worst_case_value(inst, tree).worst_value
    after = worst_case_value(inst, grown).worst_value
    assert after >= before - TOL
    assert after == worst_case_value(inst, grown, mode="full").worst_value


@fast
@given(seeds, st.sampled_from(["pi1", "pi2", "pi2_first", "combined"]))
def test_materialized_trees_fit_budget(seed, strategy):
    inst = small_instance(seed)
    if strategy == "combined":
        # the union of two half-budget sets needs the triangle inequality
        assume(verify.check_cost_axioms(inst.cost).passed)
    tree = materialize_policy_tree(inst, strategy)
    assert policy_cost(inst, tree) <= inst.budget + TOL


# -- cost constructions ----------------------------------------------------------

construction = settings(max_examples=120, deadline=None)


@construction
@given(seeds)
def test_polynomial_of_monotone_g_passes(seed):
    rng = np.random.default_rng(seed)
    g = inner_g(rng, int(rng.integers(1, 7)))
    assert verify.check_cost_sensitive_submodularity(g, poly_cost(rng, g)).passed


@construction
@given(seeds)
def test_exponential_of_monotone_g_passes(seed):
    rng = np.random.default_rng(seed)
    g = inner_g(rng, int(rng.integers(1, 7)))
    assert verify.check_cost_sensitive_submodularity(g, exp_cost(rng, g)).passed


@construction
@given(seeds, st.floats(0, 3), st.floats(0, 3))
def test_combination_preserves_pass(seed, alpha, beta):
    if alpha + beta <= 0:
        alpha = 1.0
    rng = np.random.default_rng(seed)
    g = inner_g(rng, int(rng.integers(1, 6)))
    c1, c2 = poly_cost(rng, g), exp_cost(rng, g)
    assert verify.check_cost_sensitive_submodularity(g, c1).passed
    assert verify.check_cost_sensitive_submodularity(g, c2).passed
    assert verify.check_cost_sensitive_submodularity(g, combine_costs(c1, c2, alpha, beta)).passed


@construction
@given(seeds)
def test_modular_cost_reduces_to_submodularity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    gt = rng.integers(0, 6, size=1 << n).astype(float)
    gt[0] = 0.0
    c = ModularCost((rng.integers(1, 8, size=n) * 0.5).tolist())
    assert verify.check_cost_sensitive_submodularity(gt, c).passed == verify.check_submodularity(gt).passed
