"""Budgeted pool-based active learning over a finite hypothesis class.

The learner keeps an exact Bayesian posterior over 1-D threshold
classifiers (h_t(x) = 1 iff x >= t). Observing a label zeroes out the
inconsistent hypotheses, so the posterior is the prior restricted to the
version space. Costs are modular (one cost per pool example).

Strategies:
  Passive   -- seeded random order, query whatever is still affordable.
  LC        -- least confidence: maximize min_y (1 - p[y; x]).
  AvgLC     -- least confidence per unit cost.
  BudgetLC  -- AvgLC on half the budget, then LC from scratch on the
               other half; the learner keeps the union of both label sets.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .costs import ModularCost
from .errors import ConfigurationError, InconsistentEvidenceError
from .instance import TOL
from .policies import argmax_lowest

STRATEGIES = ("Passive", "LC", "AvgLC", "BudgetLC")
COST_SCENARIOS = (
    "uniform",
    "random_subset_gamma",
    "gamma_on_label_1",
    "high_cost_low_margin",
    "high_cost_high_margin",
)
CSV_COLUMNS = ("scenario", "strategy", "budget", "seed", "spent", "n_queried", "accuracy")

DEFAULT_COST_PARAMS = {
    "gamma_subset_fraction": 0.5,
    "gamma_subset_shape": 80.0,
    "gamma_subset_scale": 0.1,
    "gamma_label_shape": 45.0,
    "gamma_label_scale": 0.1,
    "margin_low_cost": 1.0,
    "margin_high_cost": 10.0,
}


@dataclass(frozen=True)
class ALScenario:
    name: str
    pool_x: np.ndarray
    test_x: np.ndarray
    thresholds: np.ndarray
    prior: np.ndarray
    true_index: int
    cost_scenario: str
    costs: np.ndarray
    budgets: tuple[float, ...]
    seed: int
    pool_labels: np.ndarray = field(repr=False)   # (H, N) label of pool item under each hypothesis
    test_labels: np.ndarray = field(repr=False)   # (H, T)

    @property
    def true_pool(self) -> np.ndarray:
        return self.pool_labels[self.true_index]

    @property
    def true_test(self) -> np.ndarray:
        return self.test_labels[self.true_index]

    @property
    def cost_model(self) -> ModularCost:
        return ModularCost(self.costs.tolist())


@dataclass(frozen=True)
class ALResult:
    strategy: str
    budget: float
    queried: tuple[int, ...]
    spent: float
    accuracy: float


def threshold_labels(thresholds: np.ndarray, x: np.ndarray) -> np.ndarray:
    return (x[None, :] >= thresholds[:, None]).astype(np.int64)


def bayes_margins(pool_labels: np.ndarray, prior: np.ndarray) -> np.ndarray:
    """2 * |p(y=1|x) - 0.5| under the full prior; the Bayes predictor's confidence."""
    p1 = prior @ pool_labels
    return 2.0 * np.abs(p1 - 0.5)


def gen_cost_scenario(kind: str, true_labels: np.ndarray, margins: np.ndarray, seed: int,
                      params: dict | None = None) -> ModularCost:
    """Per-example costs for one of the experiment scenarios."""
    p = {**DEFAULT_COST_PARAMS, **(params or {})}
    n = len(true_labels)
    rng = np.random.default_rng([seed, 7919])
    if kind == "uniform":
        costs = np.ones(n)
    elif kind == "random_subset_gamma":
        costs = np.ones(n)
        chosen = rng.random(n) < p["gamma_subset_fraction"]
        costs[chosen] = rng.gamma(p["gamma_subset_shape"], p["gamma_subset_scale"], size=int(chosen.sum()))
    elif kind == "gamma_on_label_1":
        costs = np.ones(n)
        ones = np.asarray(true_labels) == 1
        costs[ones] = rng.gamma(p["gamma_label_shape"], p["gamma_label_scale"], size=int(ones.sum()))
    elif kind in ("high_cost_low_margin", "high_cost_high_margin"):
        lo, hi = p["margin_low_cost"], p["margin_high_cost"]
        m = np.clip(np.asarray(margins, dtype=np.float64), 0.0, 1.0)
        costs = lo + (hi - lo) * ((1.0 - m) if kind == "high_cost_low_margin" else m)
    else:
        raise ConfigurationError(f"unknown cost scenario {kind!r}")
    if np.any(costs <= 0):
        raise ConfigurationError("cost scenario produced a non-positive cost")
    return ModularCost(costs.tolist())


def make_scenario(cost_scenario: str, seed: int, budgets: Sequence[float] = (50, 100, 150, 200),
                  pool_size: int = 300, test_size: int = 500, n_thresholds: int = 512,
                  cost_params: dict | None = None, name: str | None = None) -> ALScenario:
    """Random threshold-learning scenario; all randomness flows from ``seed``."""
    if cost_scenario not in COST_SCENARIOS:
        raise ConfigurationError(f"unknown cost scenario {cost_scenario!r}")
    if any(b <= 0 for b in budgets):
        raise ConfigurationError("budgets must be positive")
    rng = np.random.default_rng(seed)
    pool_x = np.sort(rng.random(pool_size))
    test_x = rng.random(test_size)
    thresholds = (np.arange(n_thresholds) + 0.5) / n_thresholds
    prior = np.full(n_thresholds, 1.0 / n_thresholds)
    true_index = int(rng.integers(n_thresholds))
    pool_labels = threshold_labels(thresholds, pool_x)
    test_labels = threshold_labels(thresholds, test_x)
    margins = bayes_margins(pool_labels, prior)
    costs = gen_cost_scenario(cost_scenario, pool_labels[true_index], margins, seed, cost_params)
    return ALScenario(
        name or cost_scenario, pool_x, test_x, thresholds, prior, true_index, cost_scenario,
        np.array(costs.weights), tuple(float(b) for b in budgets), seed, pool_labels, test_labels,
    )


# -- posterior and selection rules -------------------------------------------


def posterior_label_probs(weights: np.ndarray, labels: np.ndarray, n_labels: int = 2) -> np.ndarray:
    """(N, n_labels) array of p[y; x] under unnormalized hypothesis ``weights``."""
    mass = weights.sum()
    if mass <= 0:
        raise InconsistentEvidenceError("observed labels have zero prior mass")
    return np.stack([(weights @ (labels == y)) / mass for y in range(n_labels)], axis=1)


def least_confidence(probs: np.ndarray) -> np.ndarray:
    """min_y (1 - p[y; x]) per example."""
    return 1.0 - probs.max(axis=1)


def select_lc(probs: np.ndarray, candidates: Sequence[int], affordable: Sequence[bool]) -> int | None:
    """Most label-uncertain affordable candidate; None when nothing is affordable."""
    pool = [x for x, ok in zip(candidates, affordable) if ok]
    if not pool:
        return None
    score = least_confidence(probs[pool])
    return pool[argmax_lowest(score)]


def select_avg_lc(probs: np.ndarray, candidates: Sequence[int], affordable: Sequence[bool],
                  costs: np.ndarray) -> int | None:
    """Affordable candidate maximizing uncertainty per unit cost."""
    pool = [x for x, ok in zip(candidates, affordable) if ok]
    if not pool:
        return None
    score = least_confidence(probs[pool]) / costs[pool]
    return pool[argmax_lowest(score)]


def _greedy_queries(sc: ALScenario, budget: float, cost_average: bool) -> list[int]:
    labels, truth, costs = sc.pool_labels, sc.true_pool, sc.costs
    weights = sc.prior.copy()
    remaining = list(range(len(costs)))
    spent = 0.0
    queried = []
    while remaining:
        # Costs are modular and spending only grows, so a skipped item never becomes affordable again.
        affordable = [spent + costs[x] <= budget + TOL for x in remaining]
        probs = posterior_label_probs(weights, labels)
        if cost_average:
            x = select_avg_lc(probs, remaining, affordable, costs)
        else:
            x = select_lc(probs, remaining, affordable)
        if x is None:
            break
        queried.append(x)
        spent += costs[x]
        weights = weights * (labels[:, x] == truth[x])
        remaining = [r for r, ok in zip(remaining, affordable) if ok and r != x]
    return queried


def _passive_queries(sc: ALScenario, budget: float) -> list[int]:
    order = np.random.default_rng([sc.seed, 104729]).permutation(len(sc.costs))
    spent = 0.0
    queried = []
    for x in order.tolist():
        if spent + sc.costs[x] <= budget + TOL:
            queried.append(x)
            spent += sc.costs[x]
    return queried


def run_strategy(sc: ALScenario, strategy: str, budget: float) -> ALResult:
    if strategy == "Passive":
        queried = _passive_queries(sc, budget)
    elif strategy == "LC":
        queried = _greedy_queries(sc, budget, cost_average=False)
    elif strategy == "AvgLC":
        queried = _greedy_queries(sc, budget, cost_average=True)
    elif strategy == "BudgetLC":
        first = _greedy_queries(sc, budget / 2, cost_average=True)
        second = _greedy_queries(sc, budget / 2, cost_average=False)
        queried = first + [x for x in second if x not in set(first)]
    else:
        raise ConfigurationError(f"unknown strategy {strategy!r}")
    spent = float(sum(sc.costs[x] for x in queried))
    return ALResult(strategy, float(budget), tuple(queried), spent, accuracy(sc, queried))


def predict(sc: ALScenario, queried: Iterable[int]) -> np.ndarray:
    """Posterior-weighted majority vote on the held-out set; exact ties predict 0."""
    weights = sc.prior.copy()
    truth = sc.true_pool
    for x in queried:
        weights = weights * (sc.pool_labels[:, x] == truth[x])
    if weights.sum() <= 0:
        raise ConfigurationError("true hypothesis is outside the hypothesis class")
    p1 = (weights @ sc.test_labels) / weights.sum()
    return (p1 > 0.5 + TOL).astype(np.int64)


def accuracy(sc: ALScenario, queried: Iterable[int]) -> float:
    return float(np.mean(predict(sc, queried) == sc.true_test))


def run_al_experiment(sc: ALScenario, strategies: Sequence[str] = STRATEGIES) -> list[ALResult]:
    """Every strategy at every budget of the scenario, in (strategy, budget) order."""
    if not 0 <= sc.true_index < len(sc.thresholds) or sc.prior[sc.true_index] <= 0:
        raise ConfigurationError("true hypothesis is outside the hypothesis class support")
    return [run_strategy(sc, s, b) for s in strategies for b in sc.budgets]


# -- experiment grid -------------------------------------------------------------


@dataclass(frozen=True)
class GridConfig:
    name: str
    cost_scenario: str
    budgets: tuple[float, ...] = (50.0, 100.0, 150.0, 200.0)
    seeds: tuple[int, ...] = (0,)
    strategies: tuple[str, ...] = STRATEGIES
    pool_size: int = 300
    test_size: int = 500
    n_thresholds: int = 512
    cost_params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "GridConfig":
        known = {"name", "cost_scenario", "budgets", "seeds", "n_seeds", "seed", "strategies",
                 "pool_size", "test_size", "n_thresholds", "cost_params"}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown scenario keys: {sorted(unknown)}")
        if "cost_scenario" not in d:
            raise ConfigurationError("scenario config needs 'cost_scenario'")
        if d["cost_scenario"] not in COST_SCENARIOS:
            raise ConfigurationError(f"unknown cost scenario {d['cost_scenario']!r}")
        if "seeds" in d:
            seeds = tuple(int(s) for s in d["seeds"])
        else:
            base = int(d.get("seed", 0))
            seeds = tuple(range(base, base + int(d.get("n_seeds", 1))))
        strategies = tuple(d.get("strategies", STRATEGIES))
        bad = [s for s in strategies if s not in STRATEGIES]
        if bad:
            raise ConfigurationError(f"unknown strategies: {bad}")
        budgets = tuple(float(b) for b in d.get("budgets", (50, 100, 150, 200)))
        if not budgets or any(b <= 0 for b in budgets):
            raise ConfigurationError("budgets must be a non-empty list of positive numbers")
        unknown_params = set(d.get("cost_params", {})) - set(DEFAULT_COST_PARAMS)
        if unknown_params:
            raise ConfigurationError(f"unknown cost_params: {sorted(unknown_params)}")
        return cls(
            name=str(d.get("name", d["cost_scenario"])), cost_scenario=d["cost_scenario"],
            budgets=budgets, seeds=seeds, strategies=strategies,
            pool_size=int(d.get("pool_size", 300)), test_size=int(d.get("test_size", 500)),
            n_thresholds=int(d.get("n_thresholds", 512)), cost_params=dict(d.get("cost_params", {})),
        )

    @classmethod
    def load(cls, path: str | Path) -> "GridConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


def run_grid(cfg: GridConfig) -> list[dict]:
    """One row per (strategy, budget, seed), in that order."""
    rows = []
    for seed in cfg.seeds:
        sc = make_scenario(cfg.cost_scenario, seed, cfg.budgets, cfg.pool_size, cfg.test_size,
                           cfg.n_thresholds, cfg.cost_params, cfg.name)
        for r in run_al_experiment(sc, cfg.strategies):
            rows.append({
                "scenario": cfg.name, "strategy": r.strategy, "budget": r.budget, "seed": seed,
                "spent": r.spent, "n_queried": len(r.queried), "accuracy": r.accuracy,
            })
    order = {s: i for i, s in enumerate(cfg.strategies)}
    rows.sort(key=lambda r: (order[r["strategy"]], r["budget"], cfg.seeds.index(r["seed"])))
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r["scenario"], r["strategy"], f"{r['budget']:g}", r["seed"],
                    f"{r['spent']:.6f}", r["n_queried"], f"{r['accuracy']:.6f}"])
    return buf.getvalue()
