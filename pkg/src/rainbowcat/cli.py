"""Command-line surface: construct, decide, brute-force, tabulate, verify.

Exit codes are the machine contract:

* label / feasible: 0 feasible, 1 infeasible, 2 usage error
* oracle: 0 found, 1 exhausted-infeasible, 3 budgeted-unknown
* table: with --cross-check, nonzero iff some row disagrees
* verify: 0 valid, 1 invalid, 2 parse error

Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from typing import List, Optional, Tuple

from . import constructor, group, labeling, oracle
from .errors import RainbowError
from .group import Element, GroupParams
from .labeling import HAIR_ROLES, Labeling, Shape


class _UsageError(Exception):
    pass


def _parse_instance(p: int, k: int, hairs: str) -> Tuple[GroupParams, Shape]:
    try:
        params = GroupParams(p, k)
    except ValueError as exc:
        raise _UsageError(str(exc))
    try:
        parts = [int(v) for v in hairs.split(",")]
    except ValueError:
        raise _UsageError(f"--hairs must be three comma-separated integers, got {hairs!r}")
    try:
        shape = labeling.make_shape(params, parts)
    except RainbowError as exc:
        raise _UsageError(str(exc))
    return params, shape


def _fmt_elem(e: Element) -> str:
    return "(" + ",".join(str(c) for c in e) + ")"


def _print_text(params: GroupParams, shape: Shape, lab: Labeling) -> None:
    print("spine:", " ".join(_fmt_elem(e) for e in lab.spine))
    for role in HAIR_ROLES:
        print(f"{role}:", " ".join(_fmt_elem(e) for e in lab.hairs(role)))
    zeta = labeling.missing_edge_label(params, shape, lab)
    print("missing:", _fmt_elem(zeta))


def _print_dot(params: GroupParams, shape: Shape, lab: Labeling) -> None:
    idx = params.index
    print("graph caterpillar {")
    part = labeling.labeling_to_partition(params, lab)
    for e in sorted(part):
        print(f'  n{idx(e)} [label="{_fmt_elem(e)}" role="{part[e]}"];')
    for u, v in labeling._edges(params, lab):
        s = group.add(params, u, v)
        print(f'  n{idx(u)} -- n{idx(v)} [label="{_fmt_elem(s)}"];')
    print("}")


def cmd_label(args) -> int:
    params, shape = _parse_instance(args.p, args.k, args.hairs)
    try:
        lab = constructor.construct(params, shape)
    except constructor.InfeasibleShapeError as exc:
        print(f"infeasible: {exc.verdict.exception}")
        if exc.verdict.detail:
            print(exc.verdict.detail, file=sys.stderr)
        return 1
    if args.verbose and params.p >= 5:
        try:
            plan = constructor.plan_components(params, shape)
            print(json.dumps(plan.to_debug_dict()), file=sys.stderr)
        except constructor._NoRecipe as exc:
            print(f"no explicit recipe ({exc}); used completion search", file=sys.stderr)
    if args.format == "json":
        print(json.dumps(labeling.labeling_to_dict(params, shape, lab)))
    elif args.format == "dot":
        _print_dot(params, shape, lab)
    else:
        _print_text(params, shape, lab)
    return 0


def cmd_feasible(args) -> int:
    params, shape = _parse_instance(args.p, args.k, args.hairs)
    verdict = constructor.feasibility(params, shape)
    if verdict.feasible:
        print("feasible")
        return 0
    print(f"infeasible: {verdict.exception}")
    if verdict.detail:
        print(verdict.detail, file=sys.stderr)
    return 1


def cmd_oracle(args) -> int:
    params, shape = _parse_instance(args.p, args.k, args.hairs)
    budget = oracle.SearchBudget(timeout_ms=args.timeout_ms, node_limit=args.node_limit)
    verdict = oracle.search(params, shape, budget, symmetry=not args.no_symmetry)
    print(f"{verdict.outcome} nodes={verdict.nodes} ms={verdict.elapsed_ms:.1f}")
    if verdict.outcome == oracle.FOUND:
        return 0
    if verdict.outcome == oracle.BUDGETED:
        return 3
    return 1


def _table_row(task) -> dict:
    p, k, h, timeout_ms, cross_check = task
    params = GroupParams(p, k)
    shape = labeling.make_shape(params, h)
    budget = oracle.SearchBudget(timeout_ms=timeout_ms) if timeout_ms else None
    return oracle.table_row(params, shape, budget, cross_check)


def cmd_table(args) -> int:
    try:
        params = GroupParams(args.p, args.k)
    except ValueError as exc:
        raise _UsageError(str(exc))
    shapes = oracle.all_shapes(params)
    tasks = [
        (args.p, args.k, shape.h, args.timeout_ms, args.cross_check)
        for shape in shapes
    ]
    disagreement = False
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = pool.map(_table_row, tasks)
            for row in rows:
                print(json.dumps(row))
                disagreement |= row["agree"] is False
    else:
        for task in tasks:
            row = _table_row(task)
            print(json.dumps(row))
            disagreement |= row["agree"] is False
    return 1 if (args.cross_check and disagreement) else 0


def cmd_verify(args) -> int:
    try:
        if args.input == "-":
            payload = sys.stdin.read()
        else:
            with open(args.input) as fh:
                payload = fh.read()
        data = json.loads(payload)
        params, shape, lab = labeling.labeling_from_dict(data)
    except (OSError, json.JSONDecodeError, RainbowError, ValueError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    try:
        report = labeling.verify(params, shape, lab)
    except RainbowError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    if report.valid:
        print(f"valid missing={_fmt_elem(report.missing_edge_label)}")
        return 0
    if report.duplicate_vertex:
        print(f"invalid: duplicate vertex label ({report.duplicate_vertex[0]} and {report.duplicate_vertex[1]})")
    elif report.duplicate_edge:
        (u1, v1), (u2, v2) = report.duplicate_edge
        print(
            "invalid: duplicate edge label "
            f"{_fmt_elem(u1)}--{_fmt_elem(v1)} and {_fmt_elem(u2)}--{_fmt_elem(v2)}"
        )
    else:
        print("invalid")
    return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbowcat",
        description="Rainbow labelings of three-spine caterpillars over Z_p^k.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_flags(sp):
        sp.add_argument("--p", type=int, required=True, help="prime modulus")
        sp.add_argument("--k", type=int, required=True, help="rank of the group")
        sp.add_argument(
            "--hairs", type=str, required=True, help="hair counts h1,h2,h3 in spine order"
        )

    sp = sub.add_parser("label", help="construct a labeling")
    instance_flags(sp)
    sp.add_argument("--format", choices=["text", "json", "dot"], default="text")
    sp.add_argument("--verbose", action="store_true", help="dump the component plan to stderr")
    sp.set_defaults(func=cmd_label)

    sp = sub.add_parser("feasible", help="closed-form feasibility verdict")
    instance_flags(sp)
    sp.set_defaults(func=cmd_feasible)

    sp = sub.add_parser("oracle", help="exhaustive search")
    instance_flags(sp)
    sp.add_argument("--timeout-ms", type=int, default=None)
    sp.add_argument("--node-limit", type=int, default=None)
    sp.add_argument(
        "--no-symmetry",
        action="store_true",
        help="search all translated spine triples instead of canonical models",
    )
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("table", help="feasibility table as JSON lines")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--cross-check", action="store_true", help="compare predicate vs oracle")
    sp.add_argument("--timeout-ms", type=int, default=None, help="oracle budget per shape")
    sp.add_argument("--jobs", type=int, default=1, help="parallel workers for table rows")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("verify", help="check a labeling JSON file")
    sp.add_argument("--input", type=str, default="-", help="path or - for stdin")
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except RainbowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
