"""Problem instances, realizations and policy trees.

Items and states are dense indices internally; identifiers are only
used at the I/O boundary. A realization is a tuple of state indices, one
per item. A partial realization is the ordered list of observations a
policy has made.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .bits import mask_of, members
from .costs import CostModel
from .errors import (
    CapExceededError,
    ConfigurationError,
    PreconditionError,
    StructuralError,
)
from .utilities import UtilityModel, require_minimal_dependency

TOL = 1e-9
DEFAULT_REALIZATION_CAP = 2**20

Realization = tuple  # tuple[int, ...], one state index per item


@dataclass(frozen=True)
class Instance:
    items: tuple[str, ...]
    states: tuple[str, ...]
    utility: UtilityModel
    cost: CostModel
    budget: float
    name: str = ""
    item_index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    state_index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "states", tuple(self.states))
        if not self.items or len(set(self.items)) != len(self.items):
            raise ConfigurationError("items must be non-empty and unique")
        if not self.states or len(set(self.states)) != len(self.states):
            raise ConfigurationError("states must be non-empty and unique")
        if not self.budget > 0:
            raise ConfigurationError("budget must be positive")
        if self.utility.n_items != len(self.items) or self.utility.n_states != len(self.states):
            raise ConfigurationError("utility shape does not match the item/state lists")
        if self.cost.n_items != len(self.items):
            raise ConfigurationError("cost is defined over a different number of items")
        object.__setattr__(self, "item_index", {x: i for i, x in enumerate(self.items)})
        object.__setattr__(self, "state_index", {y: i for i, y in enumerate(self.states)})

    @property
    def n_items(self) -> int:
        return len(self.items)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def with_budget(self, budget: float) -> "Instance":
        return Instance(self.items, self.states, self.utility, self.cost, budget, self.name)

    def realization(self, assignment: Mapping[str, str]) -> Realization:
        """Convert an identifier map into a realization tuple."""
        if set(assignment) != set(self.items):
            raise StructuralError("realization must assign a state to every item exactly")
        try:
            return tuple(self.state_index[assignment[x]] for x in self.items)
        except KeyError as exc:
            raise StructuralError(f"unknown state {exc.args[0]!r}") from None

    def realizations(self, cap: int = DEFAULT_REALIZATION_CAP) -> Iterator[Realization]:
        total = self.n_states**self.n_items
        if total > cap:
            raise CapExceededError(
                f"instance too large for exact evaluation: {total} realizations > cap {cap}"
            )
        return itertools.product(range(self.n_states), repeat=self.n_items)

    def f(self, mask: int, states: Sequence[int]) -> float:
        return self.utility.value(mask, states)


@dataclass(frozen=True)
class PartialRealization:
    observations: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "observations", tuple((int(x), int(y)) for x, y in self.observations))
        seen = [x for x, _ in self.observations]
        if len(set(seen)) != len(seen):
            raise StructuralError("an item appears twice in a partial realization")

    @property
    def selected(self) -> frozenset[int]:
        return frozenset(x for x, _ in self.observations)

    @property
    def mask(self) -> int:
        return mask_of(x for x, _ in self.observations)

    def states(self, n_items: int) -> list[int]:
        out = [-1] * n_items
        for x, y in self.observations:
            out[x] = y
        return out

    def extend(self, x: int, y: int) -> "PartialRealization":
        return PartialRealization(self.observations + ((x, y),))

    def __len__(self) -> int:
        return len(self.observations)


@dataclass(frozen=True)
class PolicyNode:
    item: int
    children: tuple["PolicyNode | None", ...]


@dataclass(frozen=True)
class PolicyTree:
    """Deterministic policy; ``root is None`` is the empty policy."""

    root: PolicyNode | None = None

    @staticmethod
    def chain(items: Sequence[int], n_states: int = 1) -> "PolicyTree":
        """Non-adaptive tree selecting ``items`` in order on every branch."""
        node = None
        for x in reversed(list(items)):
            node = PolicyNode(x, (node,) * n_states)
        return PolicyTree(node)

    def node_count(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node is not None:
                count += 1
                stack.extend(node.children)
        return count

    def paths(self) -> Iterator[PartialRealization]:
        """Root-to-leaf observation sequences, in state order."""
        stack: list[tuple[PolicyNode | None, tuple]] = [(self.root, ())]
        while stack:
            node, obs = stack.pop()
            if node is None:
                yield PartialRealization(obs)
                continue
            for y in reversed(range(len(node.children))):
                stack.append((node.children[y], obs + ((node.item, y),)))


@dataclass(frozen=True)
class PolicyValueReport:
    worst_value: float
    worst_realization: Realization
    max_path_cost: float


def _check_node(node: PolicyNode, n_states: int) -> None:
    if len(node.children) != n_states:
        raise StructuralError(
            f"node for item {node.item} has {len(node.children)} edges, expected {n_states}"
        )


def trace_policy(tree: PolicyTree, h: Realization) -> PartialRealization:
    """Observations made by ``tree`` when the true realization is ``h``."""
    obs = []
    node = tree.root
    while node is not None:
        _check_node(node, len(node.children))
        if node.item >= len(h):
            raise StructuralError(f"tree references unknown item {node.item}")
        y = h[node.item]
        if not 0 <= y < len(node.children):
            raise StructuralError(f"no edge for state {y} below item {node.item}")
        obs.append((node.item, y))
        node = node.children[y]
    return PartialRealization(tuple(obs))


def validate_policy(inst: Instance, tree: PolicyTree, budget: float | None = None) -> None:
    """Raise StructuralError unless ``tree`` is a legal policy within ``budget``."""
    budget = inst.budget if budget is None else budget
    stack = [(tree.root, 0)]
    while stack:
        node, mask = stack.pop()
        if node is None:
            continue
        if not 0 <= node.item < inst.n_items:
            raise StructuralError(f"tree references unknown item {node.item}")
        _check_node(node, inst.n_states)
        bit = 1 << node.item
        if mask & bit:
            raise StructuralError(f"item {inst.items[node.item]} repeats along a path")
        if inst.cost(mask | bit) > budget + TOL:
            raise StructuralError(
                f"path through {inst.items[node.item]} costs {inst.cost(mask | bit)} > budget {budget}"
            )
        stack.extend((child, mask | bit) for child in node.children)


def policy_cost(inst: Instance, tree: PolicyTree) -> float:
    """Maximum cost over root-to-leaf paths."""
    worst = 0.0
    for path in tree.paths():
        worst = max(worst, inst.cost(path.mask))
    return worst


def worst_case_value(inst: Instance, tree: PolicyTree, mode: str = "leaves",
                     cap: int = DEFAULT_REALIZATION_CAP) -> PolicyValueReport:
    """Exact worst-case utility of ``tree``.

    ``mode="leaves"`` minimizes over leaf paths, which is exact for
    utilities with minimal dependency; ``mode="full"`` enumerates every
    realization and works for any utility.
    """
    cost = policy_cost(inst, tree)
    n = inst.n_items
    if mode == "leaves":
        require_minimal_dependency(inst.utility)
        best = None
        for path in tree.paths():
            states = path.states(n)
            v = inst.f(path.mask, states)
            if best is None or v < best[0]:
                best = (v, tuple(max(s, 0) for s in states))
        return PolicyValueReport(best[0], best[1], cost)
    if mode == "full":
        best = None
        for h in inst.realizations(cap):
            v = inst.f(trace_policy(tree, h).mask, h)
            if best is None or v < best[0]:
                best = (v, h)
        return PolicyValueReport(best[0], best[1], cost)
    raise ValueError(f"unknown evaluation mode {mode!r}")


def marginal_gain_delta(inst: Instance, x: int, D: PartialRealization) -> float:
    """Worst-case (over the state of ``x``) utility gain of selecting ``x`` after ``D``."""
    require_minimal_dependency(inst.utility)
    mask = D.mask
    if mask >> x & 1:
        raise PreconditionError(f"item {inst.items[x]} is already selected")
    states = D.states(inst.n_items)
    base = inst.f(mask, states)
    grown = mask | (1 << x)
    gains = []
    for y in range(inst.n_states):
        states[x] = y
        gains.append(inst.f(grown, states) - base)
    return min(gains)


def describe_tree(inst: Instance, tree: PolicyTree):
    """JSON-friendly nested form: ``{"item": id, "children": {state: subtree}}``."""

    def walk(node):
        if node is None:
            return None
        return {
            "item": inst.items[node.item],
            "children": {inst.states[y]: walk(c) for y, c in enumerate(node.children)},
        }

    return walk(tree.root)


def selected_ids(inst: Instance, mask: int) -> list[str]:
    return [inst.items[i] for i in members(mask)]
