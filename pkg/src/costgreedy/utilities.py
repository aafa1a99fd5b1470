"""Utility functions f(S, h) of a selected set and a (partial) realization.

``value(mask, states)`` takes a state sequence aligned with the items;
entries of unobserved items are ``-1``. The three shipped families depend
only on the states of items in ``mask`` (minimal dependency), so a
partial realization is as good as a full one for them.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

import numpy as np

from .bits import members, popcount
from .errors import (
    ConfigurationError,
    InconsistentEvidenceError,
    MinimalDependencyError,
    PreconditionError,
)

PRIOR_TOL = 1e-9


class UtilityModel:
    n_items: int
    n_states: int
    kind: str
    # Declared contract; checked exhaustively by verify.check_pointwise_properties.
    minimal_dependency = True

    def value(self, mask: int, states: Sequence[int]) -> float:
        raise NotImplementedError


class ModularUtility(UtilityModel):
    """f(S, h) = sum over x in S of w[x, h(x)]."""

    kind = "modular"

    def __init__(self, w):
        w = np.array(w, dtype=np.float64)
        if w.ndim != 2 or w.size == 0:
            raise ConfigurationError("modular utility needs an items x states weight matrix")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ConfigurationError("utility weights must be finite and non-negative")
        w.setflags(write=False)
        self.w = w
        self.n_items, self.n_states = w.shape

    def value(self, mask, states):
        w = self.w
        return float(sum(w[i, states[i]] for i in members(mask)))


class CoverageUtility(UtilityModel):
    """f(S, h) = |union over x in S of R[x, h(x)]| for integer cell regions."""

    kind = "coverage"

    def __init__(self, universe: int, regions: Sequence[Sequence[Sequence[int]]]):
        self.universe = int(universe)
        self.n_items = len(regions)
        if self.n_items == 0:
            raise ConfigurationError("coverage utility needs at least one item")
        self.n_states = len(regions[0])
        bits = []
        for x, row in enumerate(regions):
            if len(row) != self.n_states:
                raise ConfigurationError(f"item {x} has {len(row)} regions, expected {self.n_states}")
            row_bits = []
            for cells in row:
                cells = [int(c) for c in cells]
                if any(not 0 <= c < self.universe for c in cells):
                    raise ConfigurationError(f"item {x} has a cell outside the universe")
                row_bits.append(sum(1 << c for c in set(cells)))
            bits.append(tuple(row_bits))
        self._bits = tuple(bits)

    def region(self, x: int, y: int) -> frozenset[int]:
        b = self._bits[x][y]
        return frozenset(members(b))

    def value(self, mask, states):
        covered = 0
        for i in members(mask):
            covered |= self._bits[i][states[i]]
        return float(popcount(covered))


class VersionSpaceUtility(UtilityModel):
    """Prior mass of hypotheses that disagree with h somewhere on S.

    ``hypotheses`` is an (H, n_items) integer array of labelings; ``prior``
    a probability vector over its rows.
    """

    kind = "vsr"

    def __init__(self, hypotheses, prior, n_states: int):
        hyp = np.array(hypotheses, dtype=np.int64)
        if hyp.ndim != 2 or hyp.shape[0] == 0:
            raise ConfigurationError("hypothesis class must be a non-empty 2-D array")
        if np.any(hyp < 0) or np.any(hyp >= n_states):
            raise ConfigurationError("hypothesis labels out of state range")
        prior = np.array(prior, dtype=np.float64)
        if prior.shape != (hyp.shape[0],):
            raise ConfigurationError("prior must have one entry per hypothesis")
        if np.any(prior < 0) or abs(prior.sum() - 1.0) > PRIOR_TOL:
            raise ConfigurationError("prior must be non-negative and sum to 1")
        hyp.setflags(write=False)
        prior.setflags(write=False)
        self.hypotheses = hyp
        self.prior = prior
        self.n_items = hyp.shape[1]
        self.n_states = int(n_states)

    @classmethod
    def uniform(cls, n_items: int, n_states: int) -> "VersionSpaceUtility":
        """Uniform prior over all n_states ** n_items labelings."""
        hyp = np.array(list(itertools.product(range(n_states), repeat=n_items)), dtype=np.int64)
        return cls(hyp, np.full(len(hyp), 1.0 / len(hyp)), n_states)

    def consistent(self, mask: int, states: Sequence[int]) -> np.ndarray:
        idx = list(members(mask))
        if not idx:
            return np.ones(self.hypotheses.shape[0], dtype=bool)
        observed = np.asarray([states[i] for i in idx], dtype=np.int64)
        return np.all(self.hypotheses[:, idx] == observed, axis=1)

    def consistent_mass(self, mask: int, states: Sequence[int]) -> float:
        return float(self.prior[self.consistent(mask, states)].sum())

    def value(self, mask, states):
        if mask == 0:
            return 0.0
        return float(self.prior[~self.consistent(mask, states)].sum())


class FunctionUtility(UtilityModel):
    """Wraps ``fn(mask, realization)``; used to probe the checkers.

    Minimal dependency is not assumed, so greedy policies refuse it unless
    the caller declares otherwise.
    """

    kind = "function"

    def __init__(self, fn: Callable[[int, Sequence[int]], float], n_items: int, n_states: int,
                 minimal_dependency: bool = False):
        self.fn = fn
        self.n_items = n_items
        self.n_states = n_states
        self.minimal_dependency = minimal_dependency

    def value(self, mask, states):
        return float(self.fn(mask, states))


def require_minimal_dependency(u: UtilityModel) -> None:
    if not u.minimal_dependency:
        raise MinimalDependencyError(
            f"{type(u).__name__} does not declare minimal dependency; "
            "partial-realization evaluation is undefined"
        )


def utility_eval(u: UtilityModel, mask: int, D) -> float:
    """f(S, D) for S a subset of the items observed in ``D``."""
    require_minimal_dependency(u)
    if mask & ~D.mask:
        raise PreconditionError("utility requested on items that have not been observed")
    return u.value(mask, D.states(u.n_items))


def posterior_label_prob(u: VersionSpaceUtility, D, x: int, y: int) -> float:
    """Posterior probability that item ``x`` has label ``y`` given ``D``."""
    consistent = u.consistent(D.mask, D.states(u.n_items))
    mass = u.prior[consistent].sum()
    if mass <= 0:
        raise InconsistentEvidenceError("no hypothesis with positive prior mass fits the observations")
    hit = consistent & (u.hypotheses[:, x] == y)
    return float(u.prior[hit].sum() / mass)
