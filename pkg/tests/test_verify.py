import json

import numpy as np
import pytest

from conftest import make_instance
from oracles import cost_axioms, cs_submodular, monotone, submodular
from costgreedy import verify
from costgreedy.costs import CoverageCount, ExpOfG, ModularCost, ModularWeights, PolyOfG, TableCost, unit_cost
from costgreedy.errors import CapExceededError, ConfigurationError, PreconditionError
from costgreedy.instance import PolicyTree
from costgreedy.io import instance_to_dict
from costgreedy.utilities import CoverageUtility, FunctionUtility, ModularUtility, VersionSpaceUtility


def table_fn(values):
    return lambda s: values[sum(1 << i for i in s)]


# -- cost-sensitive submodularity -----------------------------------------------


def test_modular_vs_modular_passes():
    g = ModularWeights([1, 2, 3])
    assert verify.check_cost_sensitive_submodularity(g, ModularCost([2, 1, 5])).passed


def test_square_cost_passes():
    g = ModularWeights([1.0, 2.0])
    assert verify.check_cost_sensitive_submodularity(g, PolyOfG([0, 1], g)).passed


def test_two_item_table_witness():
    g = ModularWeights([1.0, 3.0])
    c = TableCost(2, {0: 0.0, 1: 1.0, 2: 1.0, 3: 1.5})
    rep = verify.check_cost_sensitive_submodularity(g, c, labels=["x1", "x2"])
    assert rep.verdict == verify.FAIL
    w = rep.witness
    assert (w["A"], w["B"], w["x"]) == ([], ["x1"], "x2")
    assert w["ratio_A"] == 3.0 and w["ratio_B"] == 6.0


def test_witness_reproduces_violation():
    rng = np.random.default_rng(11)
    found = 0
    for _ in range(200):
        n = int(rng.integers(2, 5))
        gt = np.concatenate([[0.0], rng.integers(0, 6, size=(1 << n) - 1).astype(float)])
        gt = np.maximum.accumulate(gt)  # arbitrary values, not necessarily monotone in subsets
        ct = ModularCost(rng.integers(1, 4, size=n).tolist())
        rep = verify.check_cost_sensitive_submodularity(gt, ct)
        if rep.passed:
            continue
        found += 1
        m = rep.witness["masks"]
        A, B, x = m["A"], m["B"], m["x"]
        bit = 1 << x
        assert A & ~B == 0 and not B & bit
        lhs = (gt[A | bit] - gt[A]) * ct.increment(x, B)
        rhs = (gt[B | bit] - gt[B]) * ct.increment(x, A)
        assert lhs < rhs - 1e-9
    assert found > 20


def test_cap_and_sampling():
    g = ModularWeights([1.0] * 10)
    with pytest.raises(CapExceededError):
        verify.check_cost_sensitive_submodularity(g, unit_cost(10))
    rep = verify.check_cost_sensitive_submodularity(g, unit_cost(10), sample=500, seed=3)
    assert rep.verdict == verify.SAMPLED_PASS and rep.details["note"] == "sampled, not proven"
    sq = PolyOfG([0.0, 1.0], ModularWeights([1.0] * 10))
    rep = verify.check_cost_sensitive_submodularity(sq, unit_cost(10), sample=500, seed=3)
    assert rep.verdict == verify.FAIL  # g squared is supermodular
    assert rep.witness["gain_A"] < rep.witness["gain_B"]


def test_mismatched_sizes():
    with pytest.raises(ConfigurationError):
        verify.check_cost_sensitive_submodularity(ModularWeights([1, 2]), unit_cost(3))


def test_checker_is_relative_for_large_values():
    g = ModularWeights([1.0, 2.0, 1.5])
    c = ExpOfG(1e3, ModularWeights([4.0, 5.0, 6.0]))
    assert verify.check_cost_sensitive_submodularity(g, c).passed


# -- monotonicity, submodularity -------------------------------------------------


def test_monotone_witness():
    gt = np.array([0.0, 2.0, 1.0, 1.5])
    rep = verify.check_monotone(gt, labels=["a", "b"])
    assert not rep.passed
    assert rep.witness["A"] == ["a"] and rep.witness["x"] == "b"


def test_submodularity_of_coverage():
    assert verify.check_submodularity(CoverageCount([[0, 1], [1, 2], [0, 2, 3]])).passed
    assert not verify.check_submodularity(PolyOfG([0, 1], ModularWeights([1, 1]))).passed


def test_ns3_classical_witness():
    rep = verify.check_submodularity(verify.ns3_cost(), labels=["x1", "x2", "x3"])
    assert not rep.passed
    w = rep.witness
    assert (w["A"], w["B"], w["x"]) == (["x3"], ["x2", "x3"], "x1")
    assert w["gain_A"] == pytest.approx(0.5) and w["gain_B"] == pytest.approx(1.0)
    assert verify.check_cost_axioms(verify.ns3_cost()).passed


# -- pointwise properties -------------------------------------------------------


def test_vsr_uniform_passes():
    u = VersionSpaceUtility.uniform(3, 2)
    assert verify.check_pointwise_properties(u, ModularCost([1, 2, 3])).passed


def test_coverage_passes():
    u = CoverageUtility(5, [[[0, 1], [2]], [[1, 3], [4]], [[0], [0, 4]]])
    rep = verify.check_pointwise_properties(u, ModularCost([1, 1, 2]))
    assert rep.passed
    assert rep.details == {"pointwise monotonicity": "pass",
                           "pointwise cost-sensitive submodularity": "pass",
                           "minimal dependency": "pass"}


def test_minimal_dependency_violation():
    # f(S, h) reads the state of x3 even when x3 is not in S
    def fn(mask, h):
        return bin(mask).count("1") * (1.0 + h[2])

    u = FunctionUtility(fn, 3, 2)
    rep = verify.check_minimal_dependency(u)
    assert not rep.passed
    S = rep.witness["masks"]["S"]
    h, hp = rep.witness["h"], rep.witness["h_prime"]
    assert all(h[i] == hp[i] for i in range(3) if S >> i & 1)
    assert h[2] != hp[2]
    pw = verify.check_pointwise_properties(u, unit_cost(3))
    assert pw.witness["failed"] == "minimal dependency"


def test_pointwise_monotonicity_violation():
    def fn(mask, h):
        return 1.0 if mask == 0b01 else 0.0

    rep = verify.check_pointwise_properties(FunctionUtility(fn, 2, 1), unit_cost(2))
    assert rep.witness["failed"] == "pointwise monotonicity"
    assert rep.witness["h"] == [0, 0]


def test_pointwise_cs_violation():
    # modular utility against the NS3 cost is not cost-sensitively submodular
    u = ModularUtility([[1.0], [1.0], [1.0]])
    rep = verify.check_pointwise_properties(u, verify.ns3_cost())
    assert rep.witness["failed"] == "pointwise cost-sensitive submodularity"


def test_reports_serialize():
    rep = verify.check_cost_axioms(ModularCost([1.0, 0.0]))
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["verdict"] == "fail" and d["witness"]["axiom"] == "strict monotonicity"


# -- counter-example generators ------------------------------------------------


def test_cheap_trap_generator():
    inst = verify.gen_counterexample_thm2(10)
    assert inst.items == ("x1", "x2") and inst.n_states == 1
    assert inst.f(0b01, (0, 0)) == 1.0 and inst.f(0b10, (0, 0)) == 10.0
    assert inst.cost(0b01) == 1.0 and inst.cost(0b10) == 11.0 and inst.budget == 11.0
    with pytest.raises(PreconditionError):
        verify.gen_counterexample_thm2(1.0)


def test_unit_chain_generator():
    inst = verify.gen_counterexample_thm3(4)
    assert inst.items == ("x0", "x1", "x2", "x3", "x4")
    assert inst.f(1, (0,) * 5) == 2.0 and inst.cost(1) == 4.0 and inst.budget == 4.0
    assert all(inst.cost(1 << i) == 1.0 for i in range(1, 5))
    assert verify.thm3_unit_chain(inst, 2.0) == PolicyTree.chain([1, 2])
    with pytest.raises(PreconditionError):
        verify.gen_counterexample_thm3(1)


# -- ratio harness ----------------------------------------------------------------


def test_ratio_definition():
    assert verify.ratio(0.0, 0.0) == 1.0
    assert verify.ratio(1.0, 4.0) == 0.25
    assert verify.ratio(1.0, 0.0) == float("inf")


def test_harness_cheap_trap():
    inst = verify.gen_counterexample_thm2(10)
    rep = verify.ratio_harness(inst, verify.BEST_OF_TWO, "full")
    assert rep.ratio == 1.0 and rep.satisfied and rep.applicable
    rep = verify.ratio_harness(inst, verify.PI1, "full")
    assert rep.ratio == pytest.approx(0.1) and not rep.applicable


def test_harness_unit_chain_n6():
    inst = verify.gen_counterexample_thm3(6)
    rep = verify.ratio_harness(inst, verify.PI2, "full")
    assert rep.ratio == pytest.approx(2 / 6) and rep.satisfied


def test_harness_marks_failed_instances_not_applicable():
    inst = make_instance(ModularUtility([[1.0], [1.0], [1.0]]), verify.ns3_cost(), 2.0)
    rows = verify.bound_reports(inst)
    assert rows and not any(r.applicable for r in rows)


def test_harness_explicit_tree():
    inst = verify.gen_counterexample_thm3(10)
    trees = {"half": verify.thm3_unit_chain(inst, 5.0)}
    rep = verify.ratio_harness(inst, verify.PI2, "half", checks_passed=False, optimal_trees=trees)
    assert rep.ratio == pytest.approx(0.4)


def test_harness_serializes_infinite_ratio():
    d = verify.RatioReport("i", "pi1", "half", 1.0, 0.0, float("inf"), verify.BOUND, True, False).to_dict()
    assert d["ratio"] is None
    json.dumps(d, allow_nan=False)


def test_harness_rejects_unknown_policy():
    with pytest.raises(PreconditionError):
        verify.ratio_harness(verify.gen_counterexample_thm2(2), "nope")


# -- fuzz generator ----------------------------------------------------------------


def test_random_checked_instances_pass_and_are_seeded():
    stats = verify.FuzzStats()
    a = [instance_to_dict(i) for i in verify.random_checked_instances(15, seed=9, stats=stats)]
    b = [instance_to_dict(i) for i in verify.random_checked_instances(15, seed=9)]
    assert a == b
    assert stats.accepted == 15 and 0 <= stats.rejection_rate < 1
    for inst in verify.random_checked_instances(10, seed=10):
        assert verify.instance_passes(inst)
        assert inst.n_items <= 5 and inst.n_states <= 2


# -- agreement with the naive oracles ---------------------------------------------


def test_checkers_agree_with_naive_oracles():
    rng = np.random.default_rng(21)
    verdicts = set()
    for _ in range(120):
        n = int(rng.integers(1, 6))
        gt = rng.integers(0, 5, size=1 << n).astype(float)
        gt[0] = 0.0
        if rng.random() < 0.5:
            gt = CoverageCount([rng.choice(6, size=int(rng.integers(0, 4)), replace=False).tolist()
                                for _ in range(n)]).table()
        c = rng.choice([0, 1, 2])
        if c == 0:
            cost = ModularCost(rng.integers(1, 4, size=n).tolist())
        elif c == 1:
            cost = PolyOfG([1.0, float(rng.integers(0, 3))], ModularWeights(rng.integers(1, 3, size=n).tolist()))
        else:
            cost = ExpOfG(0.5, ModularWeights(rng.integers(1, 3, size=n).tolist()))
        ct = cost.table()
        g = table_fn(gt)
        cf = table_fn(ct)
        if all(cost.increment(x, s) > 0 for s in range(1 << n) for x in range(n) if not s >> x & 1):
            mine = verify.check_cost_sensitive_submodularity(gt, ct).passed
            assert mine == cs_submodular(g, cf, n)
            verdicts.add(mine)
        assert verify.check_submodularity(gt).passed == submodular(g, n)
        assert verify.check_monotone(gt).passed == monotone(g, n)
        assert verify.check_cost_axioms(cost).passed == cost_axioms(cf, n)
    assert verdicts == {True, False}
