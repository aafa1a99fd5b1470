"""Instance JSON reading and writing.

Schema::

    {"name": "...", "items": [...], "states": [...], "budget": 10,
     "utility": {"kind": "modular" | "coverage" | "vsr", "params": {...}},
     "cost": {"kind": "modular" | "table" | "poly_of_g" | "exp_of_g", "params": {...}}}

Pair keys are ``"item,state"``; table subset keys are item identifiers
sorted and joined by ``|`` (the empty set is ``""``).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .bits import members
from .costs import (
    CombinedCost,
    CostModel,
    CoverageCount,
    ExpOfG,
    ModularCost,
    ModularWeights,
    PolyOfG,
    TableCost,
)
from .errors import ConfigurationError
from .instance import Instance
from .utilities import CoverageUtility, ModularUtility, UtilityModel, VersionSpaceUtility


def _need(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise ConfigurationError(f"{where}: expected an object")
    if key not in d:
        raise ConfigurationError(f"{where}: missing field '{key}'")
    return d[key]


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigurationError(f"{where}: expected a number, got {v!r}")
    return float(v)


def _pair_map(raw: dict, items, states, where: str) -> dict[tuple[int, int], Any]:
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{where}: expected an object keyed by 'item,state'")
    ix = {x: i for i, x in enumerate(items)}
    sx = {y: i for i, y in enumerate(states)}
    out = {}
    for key, v in raw.items():
        x, sep, y = key.rpartition(",")
        if not sep or x not in ix or y not in sx:
            raise ConfigurationError(f"{where}: bad pair key {key!r}")
        out[ix[x], sx[y]] = v
    for i, x in enumerate(items):
        for j, y in enumerate(states):
            if (i, j) not in out:
                raise ConfigurationError(f"{where}: missing entry '{x},{y}'")
    return out


def _item_map(raw: dict, items, where: str) -> list:
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{where}: expected an object keyed by item")
    unknown = set(raw) - set(items)
    if unknown:
        raise ConfigurationError(f"{where}: unknown items {sorted(unknown)}")
    missing = [x for x in items if x not in raw]
    if missing:
        raise ConfigurationError(f"{where}: missing items {missing}")
    return [raw[x] for x in items]


def subset_key(items, mask: int) -> str:
    return "|".join(sorted(items[i] for i in members(mask)))


def _parse_utility(spec: dict, items, states) -> UtilityModel:
    kind = _need(spec, "kind", "utility")
    params = spec.get("params", {})
    where = "utility.params"
    n, m = len(items), len(states)
    if kind == "modular":
        pairs = _pair_map(_need(params, "w", where), items, states, f"{where}.w")
        w = np.zeros((n, m))
        for (i, j), v in pairs.items():
            w[i, j] = _number(v, f"{where}.w['{items[i]},{states[j]}']")
        return ModularUtility(w)
    if kind == "coverage":
        universe = int(_number(_need(params, "universe", where), f"{where}.universe"))
        pairs = _pair_map(_need(params, "regions", where), items, states, f"{where}.regions")
        regions = [[pairs[i, j] for j in range(m)] for i in range(n)]
        return CoverageUtility(universe, regions)
    if kind == "vsr":
        return _parse_vsr(params, items, states, where)
    raise ConfigurationError(f"utility.kind: unknown kind {kind!r}")


def _labeling(raw, states, where) -> tuple[int, ...]:
    sx = {y: i for i, y in enumerate(states)}
    if isinstance(raw, str):
        raw = raw.split(",")
    try:
        return tuple(sx[str(y)] for y in raw)
    except KeyError as exc:
        raise ConfigurationError(f"{where}: unknown state {exc.args[0]!r}") from None


def _parse_vsr(params, items, states, where) -> VersionSpaceUtility:
    n, m = len(items), len(states)
    prior = params.get("prior", "uniform")
    hyps = params.get("hypotheses")
    if hyps is None and isinstance(prior, dict):
        hyps = list(prior)
    if hyps is None:
        if prior != "uniform":
            raise ConfigurationError(f"{where}.prior: a list prior needs explicit 'hypotheses'")
        return VersionSpaceUtility.uniform(n, m)
    labelings = [_labeling(h, states, f"{where}.hypotheses[{k}]") for k, h in enumerate(hyps)]
    if any(len(h) != n for h in labelings):
        raise ConfigurationError(f"{where}.hypotheses: every labeling needs one state per item")
    if len(set(labelings)) != len(labelings):
        raise ConfigurationError(f"{where}.hypotheses: duplicate labelings")
    if prior == "uniform":
        p = [1.0 / len(labelings)] * len(labelings)
    elif isinstance(prior, list):
        p = [_number(v, f"{where}.prior[{k}]") for k, v in enumerate(prior)]
    elif isinstance(prior, dict):
        by_key = {_labeling(k, states, f"{where}.prior"): v for k, v in prior.items()}
        p = [_number(by_key.get(h, 0.0), f"{where}.prior") for h in labelings]
    else:
        raise ConfigurationError(f"{where}.prior: expected 'uniform', a list or an object")
    return VersionSpaceUtility(labelings, p, m)


def _parse_inner(spec, items, where):
    kind = _need(spec, "kind", where)
    params = spec.get("params", {})
    if kind == "modular_weights":
        w = _item_map(_need(params, "weights", f"{where}.params"), items, f"{where}.params.weights")
        return ModularWeights([_number(v, f"{where}.params.weights") for v in w])
    if kind == "coverage_count":
        regions = _item_map(_need(params, "regions", f"{where}.params"), items, f"{where}.params.regions")
        return CoverageCount(regions)
    raise ConfigurationError(f"{where}.kind: unknown inner kind {kind!r}")


def _parse_cost(spec: dict, items) -> CostModel:
    kind = _need(spec, "kind", "cost")
    params = spec.get("params", {})
    where = "cost.params"
    if kind == "modular":
        w = _item_map(_need(params, "weights", where), items, f"{where}.weights")
        return ModularCost([_number(v, f"{where}.weights") for v in w])
    if kind == "table":
        table = params.get("values", params) if isinstance(params, dict) else params
        if not isinstance(table, dict):
            raise ConfigurationError(f"{where}: expected a subset-key map")
        lookup = {subset_key(items, s): s for s in range(1 << len(items))}
        values = {}
        for key, v in table.items():
            if key not in lookup:
                raise ConfigurationError(f"{where}: bad subset key {key!r} (items must be sorted, joined by '|')")
            values[lookup[key]] = _number(v, f"{where}[{key!r}]")
        return TableCost(len(items), values)
    if kind == "poly_of_g":
        coeffs = _need(params, "coefficients", where)
        if not isinstance(coeffs, list):
            raise ConfigurationError(f"{where}.coefficients: expected a list")
        inner = _parse_inner(_need(params, "inner", where), items, f"{where}.inner")
        return PolyOfG([_number(a, f"{where}.coefficients") for a in coeffs], inner)
    if kind == "exp_of_g":
        alpha = _number(_need(params, "alpha", where), f"{where}.alpha")
        inner = _parse_inner(_need(params, "inner", where), items, f"{where}.inner")
        return ExpOfG(alpha, inner)
    raise ConfigurationError(f"cost.kind: unknown kind {kind!r}")


def _id_list(v, where) -> list[str]:
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise ConfigurationError(f"{where}: expected a list of strings")
    return v


def instance_from_dict(d: dict) -> Instance:
    items = _id_list(_need(d, "items", "instance"), "items")
    states = _id_list(_need(d, "states", "instance"), "states")
    budget = _number(_need(d, "budget", "instance"), "budget")
    if not items or len(set(items)) != len(items):
        raise ConfigurationError("items: must be non-empty and unique")
    if not states or len(set(states)) != len(states):
        raise ConfigurationError("states: must be non-empty and unique")
    utility = _parse_utility(_need(d, "utility", "instance"), items, states)
    cost = _parse_cost(_need(d, "cost", "instance"), items)
    return Instance(tuple(items), tuple(states), utility, cost, budget, name=str(d.get("name", "")))


def load_instance(path: str | Path) -> Instance:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return instance_from_dict(data)


# -- writing -----------------------------------------------------------------


def _inner_to_dict(g, items) -> dict:
    if isinstance(g, ModularWeights):
        return {"kind": "modular_weights", "params": {"weights": dict(zip(items, g.weights))}}
    return {"kind": "coverage_count",
            "params": {"regions": {x: sorted(r) for x, r in zip(items, g.regions)}}}


def _cost_to_dict(c: CostModel, items) -> dict:
    if isinstance(c, ModularCost):
        return {"kind": "modular", "params": {"weights": dict(zip(items, c.weights))}}
    if isinstance(c, PolyOfG):
        return {"kind": "poly_of_g", "params": {"coefficients": list(c.coefficients),
                                                "inner": _inner_to_dict(c.inner, items)}}
    if isinstance(c, ExpOfG):
        return {"kind": "exp_of_g", "params": {"alpha": c.alpha, "inner": _inner_to_dict(c.inner, items)}}
    if isinstance(c, (TableCost, CombinedCost)):
        return {"kind": "table", "params": {subset_key(items, s): float(c(s)) for s in range(1 << len(items))}}
    raise ConfigurationError(f"cannot serialize cost {c!r}")


def _utility_to_dict(u: UtilityModel, items, states) -> dict:
    if isinstance(u, ModularUtility):
        return {"kind": "modular", "params": {"w": {
            f"{x},{y}": float(u.w[i, j]) for i, x in enumerate(items) for j, y in enumerate(states)}}}
    if isinstance(u, CoverageUtility):
        return {"kind": "coverage", "params": {"universe": u.universe, "regions": {
            f"{x},{y}": sorted(u.region(i, j)) for i, x in enumerate(items) for j, y in enumerate(states)}}}
    if isinstance(u, VersionSpaceUtility):
        return {"kind": "vsr", "params": {
            "hypotheses": [[states[s] for s in row] for row in u.hypotheses.tolist()],
            "prior": [float(p) for p in u.prior]}}
    raise ConfigurationError(f"cannot serialize utility {u!r}")


def instance_to_dict(inst: Instance) -> dict:
    out = {}
    if inst.name:
        out["name"] = inst.name
    out.update(
        items=list(inst.items), states=list(inst.states), budget=inst.budget,
        utility=_utility_to_dict(inst.utility, inst.items, inst.states),
        cost=_cost_to_dict(inst.cost, inst.items),
    )
    return out
