#!/usr/bin/env python3
"""Generate feasibility tables for a list of (p,k) pairs.

Writes one JSON-lines file per group to --out-dir (table_p<P>_k<K>.jsonl) and
prints a per-group summary: shape count, feasible count, disagreements, and
oracle node totals.

Example:
    python scripts/run_tables.py --pairs 2,2 2,3 3,2 5,2 --timeout-ms 60000
"""

import argparse
import json
import pathlib
import sys

from rainbowcat import oracle
from rainbowcat.group import GroupParams


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", nargs="+", default=["2,2", "2,3", "3,2", "5,2"],
                    help="group parameters as p,k pairs")
    ap.add_argument("--timeout-ms", type=int, default=60_000,
                    help="oracle budget per shape")
    ap.add_argument("--out-dir", type=pathlib.Path, default=pathlib.Path("tables"))
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    exit_code = 0
    for pair in args.pairs:
        p, k = (int(v) for v in pair.split(","))
        params = GroupParams(p, k)
        budget = oracle.SearchBudget(timeout_ms=args.timeout_ms)
        path = args.out_dir / f"table_p{p}_k{k}.jsonl"
        feasible = budgeted = disagree = nodes = 0
        with path.open("w") as fh:
            for row in oracle.enumerate_table(params, budget):
                fh.write(json.dumps(row) + "\n")
                feasible += row["oracle"] == "found"
                budgeted += row["oracle"] == "budgeted"
                disagree += row["agree"] is False
                nodes += row["nodes"]
        if disagree:
            exit_code = 1
        print(
            f"p={p} k={k}: feasible={feasible} budgeted={budgeted} "
            f"disagreements={disagree} nodes={nodes} -> {path}"
        )
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
