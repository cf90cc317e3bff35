"""Command line front end: ``pkp generate|solve|bench|approx``."""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import bench
from .approx import ApproxCase, CaseKind, run_a_delta, select_delta
from .dp import solve_dp1
from .exact import SolverParams, run
from .generator import (PENALTY_CLASSES, PROFIT_CLASSES, SUITES, WEIGHT_TYPES, GenSpec,
                        generate, write_suite)
from .model import PkpError, read_instance, write_instance
from .oracle import brute_force

EXIT_OK, EXIT_ERROR, EXIT_TIMEOUT = 0, 1, 2


def _default_seed() -> int:
    return int(os.environ.get("PKP_SEED", "0"))


def _params(args) -> SolverParams:
    alpha = None if args.alpha == 0 else args.alpha
    t3 = None if args.t3 < 0 else args.t3
    limit = None if args.time_limit <= 0 else args.time_limit
    return SolverParams(alpha=alpha, t1=args.t1, t2=args.t2, t3=t3, time_limit=limit)


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=int, default=15, help="dominance look-back (0 = all states)")
    p.add_argument("--t1", type=int, default=5 * 10**9, help="basic DP limit on n'*c")
    p.add_argument("--t2", type=int, default=None, help="basic DP minimum window width (default n/10)")
    p.add_argument("--t3", type=int, default=3 * 10**6, help="state count enabling the penalty bound (-1 = off)")
    p.add_argument("--time-limit", type=float, default=100.0, help="seconds per instance (0 = none)")


def _add_case(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--epsilon", type=Fraction, default=Fraction(1, 10))
    p.add_argument("--case", choices=[k.value for k in CaseKind], required=required)
    p.add_argument("--C", type=int, default=None, help="constant for penalty-bounded and gap-bounded")
    p.add_argument("--rho", type=Fraction, default=None, help="ratio for profit-floor")


def _case(args) -> ApproxCase:
    return ApproxCase(CaseKind(args.case), args.epsilon, C=args.C, rho=args.rho)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pkp", description="Penalized knapsack solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write generated instance files")
    g.add_argument("--suite", choices=sorted(SUITES))
    g.add_argument("--n", type=int, default=1000)
    g.add_argument("--R", type=int, default=1000)
    g.add_argument("--weight", choices=WEIGHT_TYPES, default="a1")
    g.add_argument("--penalty", choices=PENALTY_CLASSES, default="pi1")
    g.add_argument("--profit", choices=PROFIT_CLASSES, default="p1")
    g.add_argument("--tau", default="0.5")
    g.add_argument("--seed", type=int, default=None, help="base seed (default $PKP_SEED or 0)")
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out-dir", default=".")

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("file")
    s.add_argument("--algorithm", choices=("exact", "dp1", "brute", "approx"), default="exact")
    s.add_argument("--selected", action="store_true", help="also print the selected input indices")
    _add_params(s)
    _add_case(s, required=False)

    b = sub.add_parser("bench", help="solve a directory of instances and write a CSV summary")
    b.add_argument("dir")
    b.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    b.add_argument("--group-by", default=",".join(bench.GROUP_KEYS),
                   help="comma separated subset of " + ",".join(bench.GROUP_KEYS))
    b.add_argument("--out", default="-", help="CSV path ('-' = stdout)")
    b.add_argument("--per-instance", default=None, help="optional CSV with one row per instance")
    _add_params(b)

    a = sub.add_parser("approx", help="run the approximation scheme for a special class")
    a.add_argument("file")
    a.add_argument("--selected", action="store_true")
    _add_case(a, required=True)
    return parser


def _report(inst, sol, certified: str, elapsed: float, states_max: int, show_selected: bool) -> None:
    lead = "-" if sol.leading_index is None else str(inst.items[sol.leading_index].original_index)
    print(f"{sol.value} {lead} {certified} {round(elapsed * 1000)} {states_max}")
    if show_selected:
        print(" ".join(str(i) for i in sorted(inst.items[j].original_index for j in sol.selected)))


def cmd_generate(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    if args.suite:
        paths = write_suite(args.suite, args.count, args.out_dir, seed)
        print(f"wrote {len(paths)} files to {args.out_dir}")
        return EXIT_OK
    os.makedirs(args.out_dir, exist_ok=True)
    for i in range(args.count):
        spec = GenSpec(args.n, args.R, args.weight, args.penalty, args.profit, args.tau, seed + i)
        path = os.path.join(args.out_dir, spec.filename(i))
        write_instance(generate(spec), path)
        print(path)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = read_instance(args.file)
    t0 = time.monotonic()
    states_max = 0
    if args.algorithm == "exact":
        rep = run(inst, _params(args))
        sol, states_max = rep.solution, rep.states_max
    elif args.algorithm == "dp1":
        sol = solve_dp1(inst)
    elif args.algorithm == "brute":
        sol = brute_force(inst)
    else:
        if args.case is None:
            raise PkpError("--algorithm approx needs --case")
        return _approx(inst, args, t0)
    certified = "certified" if sol.certified_optimal else "uncertified"
    _report(inst, sol, certified, time.monotonic() - t0, states_max, args.selected)
    return EXIT_OK if sol.certified_optimal else EXIT_TIMEOUT


def _approx(inst, args, t0) -> int:
    delta = select_delta(_case(args), inst)
    sol = run_a_delta(inst, delta)
    _report(inst, sol, "approx", time.monotonic() - t0, 0, args.selected)
    return EXIT_OK


def cmd_approx(args) -> int:
    return _approx(read_instance(args.file), args, time.monotonic())


def cmd_bench(args) -> int:
    paths = bench.instance_files(args.dir)
    if not paths:
        print(f"error: no instance files in {args.dir}", file=sys.stderr)
        return EXIT_ERROR
    group_by = [k for k in args.group_by.split(",") if k]
    results = bench.solve_all(paths, _params(args), jobs=args.jobs)
    rows = bench.aggregate(results, group_by)
    if args.out == "-":
        bench.write_rows(rows, bench.CSV_COLUMNS, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            bench.write_rows(rows, bench.CSV_COLUMNS, fh)
    if args.per_instance:
        with open(args.per_instance, "w", encoding="utf-8", newline="") as fh:
            bench.write_instance_rows(results, fh)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "bench": cmd_bench, "approx": cmd_approx}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PkpError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
