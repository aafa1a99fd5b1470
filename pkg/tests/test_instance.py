import itertools

import pytest

from conftest import make_instance, modular_instance
from costgreedy.costs import ModularCost
from costgreedy.errors import (
    CapExceededError,
    ConfigurationError,
    MinimalDependencyError,
    PreconditionError,
    StructuralError,
)
from costgreedy.instance import (
    PartialRealization,
    PolicyNode,
    PolicyTree,
    describe_tree,
    marginal_gain_delta,
    policy_cost,
    trace_policy,
    validate_policy,
    worst_case_value,
)
from costgreedy.utilities import FunctionUtility, ModularUtility, VersionSpaceUtility

EMPTY = PartialRealization()


def binary_tree():
    # x1 first; state 0 -> x2, state 1 -> x3 (3 binary items)
    return PolicyTree(PolicyNode(0, (PolicyNode(1, (None, None)), PolicyNode(2, (None, None)))))


def test_empty_tree():
    inst = modular_instance([[1.0, 2.0], [3.0, 4.0]], [1, 1], 2)
    tree = PolicyTree()
    assert len(trace_policy(tree, (0, 1))) == 0
    assert policy_cost(inst, tree) == 0.0
    assert worst_case_value(inst, tree).worst_value == 0.0


def test_cheap_trap_single_node(cheap_trap):
    tree = PolicyTree.chain([1])
    assert trace_policy(tree, (0, 0)).observations == ((1, 0),)
    assert policy_cost(cheap_trap, tree) == 11.0
    assert worst_case_value(cheap_trap, PolicyTree.chain([0])).worst_value == 1.0


def test_unit_chain_costs(unit_chain):
    assert policy_cost(unit_chain, PolicyTree.chain(range(1, 11))) == 10.0
    assert worst_case_value(unit_chain, PolicyTree.chain([0])).worst_value == 2.0


def test_depth_two_trace():
    tree = PolicyTree(PolicyNode(0, (PolicyNode(1, (None, None)), PolicyNode(1, (None, None)))))
    assert trace_policy(tree, (1, 1)).observations == ((0, 1), (1, 1))
    tree = binary_tree()
    assert trace_policy(tree, (1, 1, 0)).observations == ((0, 1), (2, 0))
    assert trace_policy(tree, (0, 1, 1)).observations == ((0, 0), (1, 1))


def test_trace_missing_edge():
    tree = PolicyTree(PolicyNode(0, (None,)))
    with pytest.raises(StructuralError):
        trace_policy(tree, (1,))


def test_paths_and_node_count():
    tree = binary_tree()
    assert tree.node_count() == 3
    paths = [p.observations for p in tree.paths()]
    assert paths == [((0, 0), (1, 0)), ((0, 0), (1, 1)), ((0, 1), (2, 0)), ((0, 1), (2, 1))]


def test_policy_cost_is_max_over_paths():
    inst = modular_instance([[1, 1]] * 3, [1.0, 2.0, 5.0], 10)
    assert policy_cost(inst, binary_tree()) == 6.0


def test_worst_case_modes_agree():
    w = [[1.0, 4.0], [2.0, 0.5], [3.0, 1.0]]
    inst = modular_instance(w, [1, 1, 1], 3)
    tree = binary_tree()
    a = worst_case_value(inst, tree, "leaves")
    b = worst_case_value(inst, tree, "full")
    assert a.worst_value == b.worst_value == 1.5
    assert a.max_path_cost == 2.0
    assert inst.f(trace_policy(tree, a.worst_realization).mask, a.worst_realization) == 1.5


def test_worst_case_cap():
    inst = modular_instance([[1, 1]] * 3, [1, 1, 1], 3)
    with pytest.raises(CapExceededError, match="too large"):
        worst_case_value(inst, binary_tree(), "full", cap=4)


def test_leaf_mode_needs_minimal_dependency():
    u = FunctionUtility(lambda mask, h: float(h[0]), 1, 2)
    inst = make_instance(u, ModularCost([1]), 1)
    with pytest.raises(MinimalDependencyError):
        worst_case_value(inst, PolicyTree.chain([0], 2))
    assert worst_case_value(inst, PolicyTree.chain([0], 2), "full").worst_value == 0.0


def test_worst_gain_single_state():
    inst = modular_instance([[3.0], [7.0]], [1, 1], 2)
    assert marginal_gain_delta(inst, 1, EMPTY) == 7.0


def test_worst_gain_vsr():
    inst = make_instance(VersionSpaceUtility.uniform(2, 2), ModularCost([1, 1]), 2)
    assert marginal_gain_delta(inst, 0, EMPTY) == 0.5
    D = PartialRealization(((0, 1),))
    assert marginal_gain_delta(inst, 1, D) == 0.25


def test_worst_gain_cheap_trap(cheap_trap):
    assert marginal_gain_delta(cheap_trap, 1, EMPTY) == 10.0


def test_worst_gain_rejects_selected_item():
    inst = modular_instance([[1.0], [2.0]], [1, 1], 2)
    with pytest.raises(PreconditionError):
        marginal_gain_delta(inst, 0, PartialRealization(((0, 0),)))


def test_worst_gain_takes_worst_state():
    inst = modular_instance([[5.0, 1.0, 3.0]], [1.0], 1)
    assert marginal_gain_delta(inst, 0, EMPTY) == 1.0


def test_partial_realization_rejects_duplicates():
    with pytest.raises(StructuralError):
        PartialRealization(((0, 0), (0, 1)))
    D = PartialRealization(((2, 1),)).extend(0, 0)
    assert D.selected == {0, 2} and D.mask == 0b101 and D.states(3) == [0, -1, 1]


def test_validate_policy():
    inst = modular_instance([[1, 1]] * 3, [1.0, 2.0, 5.0], 4)
    with pytest.raises(StructuralError, match="budget"):
        validate_policy(inst, binary_tree())
    validate_policy(inst, binary_tree(), budget=6)
    with pytest.raises(StructuralError, match="repeats"):
        validate_policy(inst, PolicyTree(PolicyNode(0, (PolicyNode(0, (None, None)), None))), 10)
    with pytest.raises(StructuralError, match="edges"):
        validate_policy(inst, PolicyTree(PolicyNode(0, (None,))), 10)
    with pytest.raises(StructuralError, match="unknown"):
        validate_policy(inst, PolicyTree.chain([7], 2), 10)


def test_instance_validation():
    u = ModularUtility([[1.0], [2.0]])
    with pytest.raises(ConfigurationError):
        make_instance(u, ModularCost([1.0]), 1.0)
    with pytest.raises(ConfigurationError):
        make_instance(u, ModularCost([1.0, 1.0]), 0.0)


def test_realization_mapping(cheap_trap):
    assert cheap_trap.realization({"x1": "0", "x2": "0"}) == (0, 0)
    with pytest.raises(StructuralError):
        cheap_trap.realization({"x1": "0"})
    with pytest.raises(StructuralError):
        cheap_trap.realization({"x1": "0", "x2": "9"})


def test_describe_tree(cheap_trap):
    assert describe_tree(cheap_trap, PolicyTree.chain([1])) == {"item": "x2", "children": {"0": None}}


def test_realizations_enumerated_in_order():
    inst = modular_instance([[1, 1, 1]] * 2, [1, 1], 1)
    assert list(inst.realizations()) == list(itertools.product(range(3), repeat=2))
