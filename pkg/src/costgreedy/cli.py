"""Command-line front end.

Exit status: 0 when every check/bound passes, 1 when a verified property
fails, 2 on usage, I/O or configuration errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import verify
from .active import GridConfig, rows_to_csv, run_grid
from .errors import CapExceededError, CostGreedyError
from .instance import TOL, Instance, PartialRealization
from .io import instance_to_dict, load_instance
from .policies import (
    BRUTE_FORCE_MAX_ITEMS,
    COMBINED,
    PI1,
    PI2,
    run_combined_half,
    run_greedy_cost_average,
    run_greedy_cost_insensitive,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(None), help="seed for randomized paths (default 0)")
    parser.add_argument("--format", choices=("text", "json", "csv"), default=d(None),
                        help="output format (default: text on a terminal, machine format otherwise)")
    parser.add_argument("--tolerance", type=float, default=d(TOL), help="checker comparison tolerance")
    parser.add_argument("--max-items", type=int, default=d(None),
                        help="raise the brute-force/checker item cap (use with care)")
    parser.add_argument("--out", default=d(None), help="write output to this file")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="costgreedy", description=__doc__.splitlines()[0])
    _common(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="cost axioms and pointwise utility properties")
    c.add_argument("instance")
    _common(c, suppress=True)

    r = sub.add_parser("run", help="run a greedy policy")
    r.add_argument("instance")
    r.add_argument("--policy", required=True, choices=(PI1, PI2, COMBINED))
    r.add_argument("--realization", help='JSON object mapping item -> state, e.g. \'{"x1": "0"}\'')
    r.add_argument("--all", action="store_true", help="trace every realization")
    r.add_argument("--budget", type=float, help="override the instance budget")
    _common(r, suppress=True)

    v = sub.add_parser("verify-bounds", help="exact ratios against the brute-force optimum")
    v.add_argument("instance", nargs="?")
    v.add_argument("--random", type=int, metavar="N", help="N random instances that pass all checkers")
    v.add_argument("--counterexample", choices=("thm2", "thm3"))
    v.add_argument("--p", type=float, default=10.0)
    v.add_argument("--n", type=int, default=10)
    v.add_argument("--policy", choices=verify.HARNESS_POLICIES)
    v.add_argument("--reference", choices=("full", "half"), default="full")
    _common(v, suppress=True)

    e = sub.add_parser("counterexample", help="emit a counter-example instance as JSON")
    e.add_argument("which", choices=("thm2", "thm3"))
    e.add_argument("--p", type=float, default=10.0)
    e.add_argument("--n", type=int, default=10)
    _common(e, suppress=True)

    a = sub.add_parser("al", help="run an active-learning experiment grid")
    a.add_argument("config")
    _common(a, suppress=True)
    return p


def _fmt(args, machine: str) -> str:
    if args.format:
        return args.format
    if args.out or not sys.stdout.isatty():
        return machine
    return "text"


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _caps(args) -> dict:
    if args.max_items is None:
        return {}
    print(f"warning: brute-force item cap raised to {args.max_items} "
          f"(default {BRUTE_FORCE_MAX_ITEMS}); runtime grows doubly exponentially",
          file=sys.stderr)
    return {"max_items": args.max_items}


def _load(path) -> Instance:
    try:
        return load_instance(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# -- subcommands ----------------------------------------------------------------


def cmd_check(args) -> int:
    inst = _load(args.instance)
    kw = {}
    if args.max_items is not None:
        print(f"warning: checker item cap raised to {args.max_items}", file=sys.stderr)
        kw["max_items"] = args.max_items
    labels = list(inst.items)
    reports = [
        verify.check_cost_axioms(inst.cost, args.tolerance, labels, **kw),
        verify.check_pointwise_properties(inst.utility, inst.cost, args.tolerance, labels=labels),
    ]
    if _fmt(args, "json") == "text":
        lines = []
        for rep in reports:
            lines.append(f"{rep.property}: {rep.verdict} ({rep.pairs_checked} checked)")
            for k, v in rep.details.items():
                lines.append(f"  {k}: {v}")
            if rep.witness:
                lines.append(f"  witness: {json.dumps(rep.witness)}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, "\n".join(json.dumps(rep.to_dict()) for rep in reports) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _trace_dict(inst: Instance, tr) -> dict:
    return {
        "policy": tr.policy,
        "budget": tr.budget,
        "selected": [inst.items[x] for x in tr.selected_order],
        "cost": tr.final_cost,
        "decisions": [
            {"item": inst.items[d.item], "score": d.score, "affordable": d.affordable,
             "selected": d.selected,
             "observed_state": None if d.observed_state is None else inst.states[d.observed_state]}
            for d in tr.decisions
        ],
    }


def cmd_run(args) -> int:
    inst = _load(args.instance)
    if args.budget is not None:
        inst = inst.with_budget(args.budget)
    if args.realization:
        try:
            hs = [inst.realization(json.loads(args.realization))]
        except json.JSONDecodeError as exc:
            raise UsageError(f"--realization is not valid JSON: {exc.msg}") from None
    else:
        hs = list(inst.realizations())
    records = []
    for h in hs:
        rec = {"realization": {x: inst.states[s] for x, s in zip(inst.items, h)}}
        if args.policy == COMBINED:
            res = run_combined_half(inst, h)
            rec.update(
                policy=COMBINED, s1=sorted(inst.items[x] for x in res.s1),
                s2=sorted(inst.items[x] for x in res.s2),
                selected=sorted(inst.items[x] for x in res.union),
                value=res.value_on_realization,
                first=_trace_dict(inst, res.first), second=_trace_dict(inst, res.second),
            )
        else:
            run = run_greedy_cost_average if args.policy == PI1 else run_greedy_cost_insensitive
            tr = run(inst, h)
            rec.update(_trace_dict(inst, tr))
            rec["value"] = inst.f(PartialRealization(tr.observations.observations).mask, h)
        records.append(rec)
    summary = {"policy": args.policy, "budget": inst.budget, "realizations": len(records),
               "worst_value": min(r["value"] for r in records)}
    if _fmt(args, "json") == "text":
        lines = [f"{r['policy']} under {r['realization']}: selected {r['selected']} value {r['value']:g}"
                 for r in records]
        lines.append(f"worst value over {len(records)} realization(s): {summary['worst_value']:g}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, json.dumps({"summary": summary, "traces": records}, indent=2) + "\n")
    return EXIT_OK


def _bound_instances(args):
    if sum(x is not None and x is not False for x in (args.instance, args.random, args.counterexample)) != 1:
        raise UsageError("give exactly one of: an instance path, --random N, --counterexample")
    if args.instance:
        yield _load(args.instance), None
    elif args.counterexample == "thm2":
        yield verify.gen_counterexample_thm2(args.p), None
    elif args.counterexample == "thm3":
        inst = verify.gen_counterexample_thm3(args.n)
        trees = {"full": verify.thm3_unit_chain(inst, inst.budget),
                 "half": verify.thm3_unit_chain(inst, inst.budget / 2)}
        yield inst, trees
    else:
        for inst in verify.random_checked_instances(args.random, args.seed or 0):
            yield inst, None


def cmd_verify_bounds(args) -> int:
    caps = _caps(args)
    rows = []
    violated = False
    for inst, trees in _bound_instances(args):
        note = None
        try:
            passed = verify.instance_passes(inst, args.tolerance, **caps)
        except CapExceededError as exc:
            passed, note = False, f"checkers not run: {exc}"
        try:
            ev = verify._Evaluator(inst, trees, **caps)
            if args.policy:
                reps = [verify.ratio_harness(inst, args.policy, args.reference, passed, evaluator=ev)]
            else:
                reps = [verify.ratio_harness(inst, pol, ref, passed, evaluator=ev)
                        for pol, ref in ((verify.BEST_OF_TWO, "full"), (verify.BEST_OF_TWO_FIRST, "full"),
                                         (COMBINED, "half"), (PI1, "half"))]
        except CapExceededError as exc:
            rows.append({"instance_id": inst.name, "skipped": str(exc)})
            continue
        for rep in reps:
            violated |= rep.applicable and not rep.satisfied
            row = rep.to_dict()
            if note:
                row["note"] = note
            rows.append(row)
    if _fmt(args, "json") == "text":
        lines = []
        for r in rows:
            if "skipped" in r:
                lines.append(f"{r['instance_id']}: skipped ({r['skipped']})")
                continue
            verdict = ("ok" if r["satisfied"] else "VIOLATED") if r["applicable"] else "no claim"
            shown = "inf" if r["ratio"] is None else f"{r['ratio']:.6f}"
            lines.append(f"{r['instance_id']}: {r['policy']} vs {r['reference']}-budget optimum "
                         f"{r['value_policy']:g}/{r['value_optimal']:g} = {shown} [{verdict}]"
                         + (f" ({r['note']})" if "note" in r else ""))
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, "\n".join(json.dumps(r) for r in rows) + "\n")
    return EXIT_FAIL if violated else EXIT_OK


def cmd_counterexample(args) -> int:
    inst = verify.gen_counterexample_thm2(args.p) if args.which == "thm2" else verify.gen_counterexample_thm3(args.n)
    _emit(args, json.dumps(instance_to_dict(inst), indent=2) + "\n")
    return EXIT_OK


def cmd_al(args) -> int:
    try:
        cfg = GridConfig.load(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read {args.config}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.config}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{args.config}: {exc}") from None
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seeds=tuple(range(args.seed, args.seed + len(cfg.seeds))))
    rows = run_grid(cfg)
    if _fmt(args, "csv") == "json":
        _emit(args, "\n".join(json.dumps(r) for r in rows) + "\n")
    else:
        _emit(args, rows_to_csv(rows))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "verify-bounds": cmd_verify_bounds,
    "counterexample": cmd_counterexample,
    "al": cmd_al,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, CostGreedyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
