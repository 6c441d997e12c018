"""Command-line front end.

Subcommands: run (evaluate a mechanism), audit (check all properties),
gen (write a random instance), explain (trace the shortest-path split).

Exit codes: 0 success, 1 semantic validation failure, 2 I/O or parse
failure, 3 audited property failure.  Machine-readable output (--format
machine) is key-sorted JSON with costs rendered as exact rationals, stable
byte-for-byte for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .audit import AuditConfig, audit_all
from .errors import DagShareError, ParseError
from .fileio import parse_instance, parse_reports, serialize_instance
from .gen import generate_instance
from .mechanisms import (
    DEFAULT_TIE_SEED,
    MECHANISM_NAMES,
    Outcome,
    decompose_shortest_path,
    run_mechanism,
)
from .model import Instance, ReportProfile, induce, validate_instance, validate_reports

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_PROPERTY = 3

TIE_SEED_ENV = "DAGSHARE_TIE_SEED"


def _default_tie_seed() -> int:
    raw = os.environ.get(TIE_SEED_ENV)
    if raw is None:
        return DEFAULT_TIE_SEED
    try:
        return int(raw)
    except ValueError:
        print(
            f"warning: ignoring non-integer {TIE_SEED_ENV}={raw!r}", file=sys.stderr
        )
        return DEFAULT_TIE_SEED


def _load_instance(path: str) -> Instance:
    text = Path(path).read_text(encoding="utf-8")
    instance = parse_instance(text)
    validate_instance(instance)
    return instance


def _load_reports(instance: Instance, path: str | None) -> ReportProfile:
    if path is None:
        reports = ReportProfile.truthful(instance)
        validate_reports(instance, reports)
        return reports
    return parse_reports(Path(path).read_text(encoding="utf-8"), instance)


def _edge_text(edge: tuple[str, str]) -> str:
    return f"({edge[0]},{edge[1]})"


def _outcome_json(outcome: Outcome) -> dict:
    return {
        "mechanism": outcome.mechanism,
        "winner": outcome.selection.winner,
        "runner_up": outcome.selection.runner_up,
        "tree_costs": {c: str(v) for c, v in sorted(outcome.selection.all_costs.items())},
        "payments": {c: str(p) for c, p in sorted(outcome.payments.items())},
        "selected_edges": [[u, v] for u, v in sorted(outcome.selected_edges)],
        "shares": {n: str(x) for n, x in sorted(outcome.shares.items())},
        "notes": list(outcome.notes),
    }


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _print_outcome(outcome: Outcome) -> None:
    sel = outcome.selection
    print(f"mechanism: {outcome.mechanism}")
    print(f"winner: {sel.winner} (tree cost {sel.winner_cost})")
    print(f"runner-up: {sel.runner_up} (tree cost {sel.runner_up_cost})")
    print(f"payment to {sel.winner}: {sel.runner_up_cost}")
    print("selected edges: " + " ".join(_edge_text(e) for e in sorted(outcome.selected_edges)))
    print("shares:")
    for node in sorted(outcome.shares):
        print(f"  {node}: {outcome.shares[node]}")
    print(f"total shares: {sum(outcome.shares.values(), Fraction(0))}")
    for note in outcome.notes:
        print(f"warning: {note}", file=sys.stderr)


def cmd_run(args) -> int:
    instance = _load_instance(args.instance)
    reports = _load_reports(instance, args.reports)
    outcome = run_mechanism(
        args.mech, instance, reports, tie_seed=args.tie_seed, shapley_limit=args.shapley_limit
    )
    if args.format == "machine":
        _print_json(_outcome_json(outcome))
    else:
        _print_outcome(outcome)
    return EXIT_OK


def cmd_audit(args) -> int:
    instance = _load_instance(args.instance)
    config = AuditConfig(
        tie_seed=args.tie_seed,
        shapley_limit=args.shapley_limit,
        node_budget=args.budget,
        grid=tuple(Fraction(g) for g in args.grid.split(",")),
    )
    report = audit_all(instance, args.mech, config)
    if args.format == "machine":
        _print_json(report.to_json_dict())
    else:
        print(report.to_text(), end="")
    if not report.all_passed:
        first = report.failures[0]
        print(f"property failed: {first.prop}", file=sys.stderr)
        return EXIT_PROPERTY
    return EXIT_OK


def cmd_gen(args) -> int:
    instance = generate_instance(
        seed=args.seed,
        n_nodes=args.nodes,
        n_contractors=args.contractors,
        edge_density=args.density,
        cost_range=(args.cost_min, args.cost_max),
    )
    text = serialize_instance(instance)
    if args.output is None:
        print(text, end="")
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_explain(args) -> int:
    instance = _load_instance(args.instance)
    reports = _load_reports(instance, args.reports)
    outcome = run_mechanism("shortest-path", instance, reports, tie_seed=args.tie_seed)
    sel = outcome.selection
    graph = induce(instance, reports, sel.winner)
    decomposition = decompose_shortest_path(graph, tie_seed=args.tie_seed)
    print(f"winner: {sel.winner} (tree cost {sel.winner_cost})")
    print(f"runner-up: {sel.runner_up} (tree cost {sel.runner_up_cost})")
    print(f"payment to {sel.winner}: {sel.runner_up_cost}")
    print("processing order: " + ", ".join(decomposition.order))
    for step in decomposition.steps:
        path = " -> ".join(step.path_nodes)
        zeroed = " ".join(_edge_text(e) for e in step.newly_zeroed) or "none"
        print(f"d({step.node}) = {step.cost}  path {path}  zeroed {zeroed}")
    print(f"total charged: {decomposition.total}")
    print("selected edges: " + " ".join(_edge_text(e) for e in sorted(decomposition.selected_edges)))
    print("shares:")
    for node in sorted(outcome.shares):
        print(f"  {node}: {outcome.shares[node]}")
    for note in outcome.notes:
        print(f"warning: {note}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dagshare",
        description="Cost-sharing mechanisms and audits on source-rooted weighted DAGs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, mech=True):
        if mech:
            p.add_argument(
                "--mech",
                choices=MECHANISM_NAMES,
                default="shortest-path",
                help="mechanism to evaluate (default: shortest-path)",
            )
        p.add_argument(
            "--reports",
            metavar="OVERLAY",
            help="report-overlay file applied on top of the truthful profile",
        )
        p.add_argument(
            "--tie-seed",
            type=int,
            default=_default_tie_seed(),
            help=f"seed for equal-depth ordering (default {DEFAULT_TIE_SEED}, "
            f"override with ${TIE_SEED_ENV})",
        )
        p.add_argument(
            "--shapley-limit",
            type=int,
            default=12,
            help="max reachable agents for the shapley mechanism (default 12)",
        )
        p.add_argument(
            "--format", choices=("human", "machine"), default="human",
            help="output style (machine = stable key-sorted JSON)",
        )
        p.add_argument("instance", help="instance file")

    p_run = sub.add_parser("run", help="evaluate one mechanism on an instance")
    add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_audit = sub.add_parser("audit", help="check all properties, searching for deviations")
    add_common(p_audit)
    p_audit.add_argument(
        "--budget",
        type=int,
        default=None,
        help="cap on node-deviation evaluations (0 skips the node audit)",
    )
    p_audit.add_argument(
        "--grid",
        default="1/2,9/10,11/10,2",
        help="comma-separated misquote factors for the contractor audit",
    )
    p_audit.set_defaults(func=cmd_audit)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--nodes", type=int, required=True, help="number of agent nodes")
    p_gen.add_argument("--contractors", type=int, default=2)
    p_gen.add_argument("--density", type=float, default=0.5)
    p_gen.add_argument("--cost-min", type=int, default=1)
    p_gen.add_argument("--cost-max", type=int, default=20)
    p_gen.add_argument("-o", "--output", help="write to this file instead of stdout")
    p_gen.set_defaults(func=cmd_gen)

    p_explain = sub.add_parser(
        "explain", help="trace the shortest-path split node by node"
    )
    add_common(p_explain, mech=False)
    p_explain.set_defaults(func=cmd_explain)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: ParseError: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    except DagShareError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
