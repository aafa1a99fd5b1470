"""Cost set functions over item subsets.

All costs are evaluated on bitmasks (bit i = item i). A valid cost has
c(empty) = 0, is strictly monotone and satisfies c(A | B) <= c(A) + c(B);
those axioms are verified by :func:`costgreedy.verify.check_cost_axioms`,
not at construction, so that invalid costs can still be loaded and
diagnosed.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np

from .bits import members, popcount
from .errors import ConfigurationError, PreconditionError

# Dense tables are built for exhaustive checking only.
MAX_TABLE_ITEMS = 20


class SetFunction:
    """A real-valued function of an item subset, given as a bitmask."""

    n_items: int

    def __call__(self, mask: int) -> float:
        raise NotImplementedError

    def table(self) -> np.ndarray:
        """Dense array of values indexed by bitmask (cached)."""
        cached = self.__dict__.get("_table")
        if cached is None:
            if self.n_items > MAX_TABLE_ITEMS:
                raise PreconditionError(
                    f"dense table over {self.n_items} items is too large"
                )
            cached = np.array([self(s) for s in range(1 << self.n_items)], dtype=np.float64)
            cached.setflags(write=False)
            self.__dict__["_table"] = cached
        return cached


class ModularWeights(SetFunction):
    """g(S) = sum of non-negative per-item weights."""

    kind = "modular_weights"

    def __init__(self, weights: Sequence[float]):
        self.weights = tuple(float(w) for w in weights)
        if any(w < 0 or not math.isfinite(w) for w in self.weights):
            raise ConfigurationError("inner weights must be finite and non-negative")
        self.n_items = len(self.weights)

    def __call__(self, mask: int) -> float:
        return float(sum(self.weights[i] for i in members(mask)))

    def __repr__(self) -> str:
        return f"ModularWeights({list(self.weights)})"


class CoverageCount(SetFunction):
    """g(S) = number of cells covered by the union of per-item regions."""

    kind = "coverage_count"

    def __init__(self, regions: Sequence[Sequence[int]]):
        self.regions = tuple(frozenset(int(c) for c in r) for r in regions)
        if any(c < 0 for r in self.regions for c in r):
            raise ConfigurationError("cell indices must be non-negative")
        self._bits = tuple(sum(1 << c for c in r) for r in self.regions)
        self.n_items = len(self.regions)

    def __call__(self, mask: int) -> float:
        covered = 0
        for i in members(mask):
            covered |= self._bits[i]
        return float(popcount(covered))

    def __repr__(self) -> str:
        return f"CoverageCount({[sorted(r) for r in self.regions]})"


InnerSetFunction = ModularWeights | CoverageCount


class CostModel(SetFunction):
    """Base class for costs. ``increment`` is the marginal cost of one item."""

    kind: str

    def increment(self, x: int, mask: int) -> float:
        if mask >> x & 1:
            raise PreconditionError(f"item {x} is already in the set")
        return self(mask | (1 << x)) - self(mask)


class ModularCost(CostModel):
    kind = "modular"

    def __init__(self, weights: Sequence[float]):
        self.weights = tuple(float(w) for w in weights)
        if not self.weights:
            raise ConfigurationError("modular cost needs at least one item")
        if any(not math.isfinite(w) for w in self.weights):
            raise ConfigurationError("cost weights must be finite")
        self.n_items = len(self.weights)

    def __call__(self, mask: int) -> float:
        return float(sum(self.weights[i] for i in members(mask)))

    def increment(self, x: int, mask: int) -> float:
        if mask >> x & 1:
            raise PreconditionError(f"item {x} is already in the set")
        return self.weights[x]

    def __repr__(self) -> str:
        return f"ModularCost({list(self.weights)})"


class TableCost(CostModel):
    """Explicit value for every subset; partial tables are rejected."""

    kind = "table"

    def __init__(self, n_items: int, values: Mapping[int, float]):
        self.n_items = int(n_items)
        full = 1 << self.n_items
        missing = [s for s in range(full) if s not in values]
        if missing:
            raise ConfigurationError(
                f"table cost is missing {len(missing)} of {full} subsets (first: mask {missing[0]})"
            )
        extra = [s for s in values if not 0 <= s < full]
        if extra:
            raise ConfigurationError(f"table cost has out-of-range subset mask {extra[0]}")
        self.values = tuple(float(values[s]) for s in range(full))

    def __call__(self, mask: int) -> float:
        return self.values[mask]

    def table(self) -> np.ndarray:
        return np.array(self.values, dtype=np.float64)

    def __repr__(self) -> str:
        return f"TableCost(n_items={self.n_items})"


class PolyOfG(CostModel):
    """c(S) = sum_i a_i * g(S)**i for i = 1..len(a)."""

    kind = "poly_of_g"

    def __init__(self, coefficients: Sequence[float], inner: InnerSetFunction):
        self.coefficients = tuple(float(a) for a in coefficients)
        if not self.coefficients or any(a < 0 for a in self.coefficients):
            raise ConfigurationError("poly_of_g coefficients must be non-negative")
        if sum(self.coefficients) <= 0:
            raise ConfigurationError("poly_of_g coefficients must not all be zero")
        self.inner = inner
        self.n_items = inner.n_items

    def __call__(self, mask: int) -> float:
        g = self.inner(mask)
        return float(sum(a * g ** (i + 1) for i, a in enumerate(self.coefficients)))

    def __repr__(self) -> str:
        return f"PolyOfG({list(self.coefficients)}, {self.inner!r})"


class ExpOfG(CostModel):
    """c(S) = alpha * (exp(g(S)) - 1).

    The ``- 1`` shift keeps c(empty) = 0; it leaves every increment of the
    unshifted alpha * exp(g) unchanged.
    """

    kind = "exp_of_g"

    def __init__(self, alpha: float, inner: InnerSetFunction):
        self.alpha = float(alpha)
        if not self.alpha > 0:
            raise ConfigurationError("exp_of_g needs alpha > 0")
        self.inner = inner
        self.n_items = inner.n_items

    def __call__(self, mask: int) -> float:
        return self.alpha * math.expm1(self.inner(mask))

    def __repr__(self) -> str:
        return f"ExpOfG({self.alpha}, {self.inner!r})"


class CombinedCost(CostModel):
    """alpha * c1 + beta * c2."""

    kind = "combined"

    def __init__(self, c1: CostModel, c2: CostModel, alpha: float, beta: float):
        self.c1, self.c2 = c1, c2
        self.alpha, self.beta = float(alpha), float(beta)
        self.n_items = c1.n_items

    def __call__(self, mask: int) -> float:
        return self.alpha * self.c1(mask) + self.beta * self.c2(mask)

    def __repr__(self) -> str:
        return f"CombinedCost({self.alpha} * {self.c1!r} + {self.beta} * {self.c2!r})"


def cost_eval(c: CostModel, mask: int) -> float:
    return c(mask)


def cost_increment(c: CostModel, x: int, mask: int) -> float:
    return c.increment(x, mask)


def combine_costs(c1: CostModel, c2: CostModel, alpha: float, beta: float) -> CostModel:
    """Non-negative combination of two costs over the same items.

    Two modular costs combine into a modular cost with summed weights.
    """
    if alpha < 0 or beta < 0:
        raise ConfigurationError("combination weights must be non-negative")
    if alpha + beta <= 0:
        raise ConfigurationError("degenerate combination: alpha + beta must be positive")
    if c1.n_items != c2.n_items:
        raise ConfigurationError("costs are defined over different item sets")
    if isinstance(c1, ModularCost) and isinstance(c2, ModularCost):
        return ModularCost([alpha * a + beta * b for a, b in zip(c1.weights, c2.weights)])
    return CombinedCost(c1, c2, alpha, beta)


def unit_cost(n_items: int) -> ModularCost:
    """Cardinality cost; cost-sensitive submodularity under it is plain submodularity."""
    return ModularCost([1.0] * n_items)
