"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import experiments, verify
from .formats import (
    InputError,
    instance_from_json,
    merge_scenario_from_json,
    read_json,
    report_to_json,
    solution_to_json,
    write_json,
)
from .graph import DomainError
from .instances import CASE2_CENTERS, CASE2_VARIANCE
from .solve import prune_bap
from .structure import check_merge_conditions

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _writable(path: str | None) -> None:
    if path is None:
        return
    parent = Path(path).resolve().parent
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise UsageError(f"cannot write to {path}")


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _centers(text: str) -> tuple[tuple[float, float], tuple[float, float]]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("--centers expects x1,y1,x2,y2")
    return (vals[0], vals[1]), (vals[2], vals[3])


def cmd_solve(args) -> int:
    _writable(args.output)
    inst, initial = instance_from_json(read_json(args.input))
    if args.cold:
        initial = None
    try:
        sol, _ = prune_bap(inst, initial)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    _emit(write_json(solution_to_json(sol), None), args.output)
    return EXIT_OK


def cmd_merge(args) -> int:
    _writable(args.output)
    sc = merge_scenario_from_json(read_json(args.input))
    try:
        report = check_merge_conditions(sc) if sc.sol2 is not None else None
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    out = report_to_json(report) if report is not None else {"merge_bound": sc.sol1.bottleneck_value}
    if args.warm:
        warm, _ = prune_bap(sc.combined, sc.warm_start())
        cold, _ = prune_bap(sc.combined)
        out["warm"] = solution_to_json(warm)
        out["cold"] = solution_to_json(cold)
    _emit(write_json(out, None), args.output)
    return EXIT_OK


def _summary_path(args) -> str | None:
    if args.summary:
        return args.summary
    if args.output:
        p = Path(args.output)
        return str(p.with_name(p.stem + "_summary.csv"))
    return None


def cmd_case1(args) -> int:
    if args.sizes:
        configs = [(s, s // 2, s - s // 2) for s in args.sizes]
    else:
        n1 = args.n1 if args.n1 is not None else args.m3 // 2
        n2 = args.n2 if args.n2 is not None else args.m3 - n1
        configs = [(args.m3, n1, n2)]
    for m3, n1, n2 in configs:
        if n1 < 1 or n2 < 0 or m3 != n1 + n2:
            raise UsageError(f"need n1 >= 1, n2 >= 0 and m3 = n1 + n2, got m3={m3} n1={n1} n2={n2}")
    summary = _summary_path(args)
    _writable(args.output)
    _writable(summary)
    records = []
    for m3, n1, n2 in configs:
        records += experiments.case1_trials(m3, n1, n2, args.trials, args.seed, not args.no_oracle)
    _emit(experiments.records_csv(records), args.output)
    if summary is not None:
        _emit(experiments.summary_csv(experiments.summarize(records)), summary)
    return EXIT_OK


def cmd_case2(args) -> int:
    ks = args.ks or [args.k]
    if any(k < 1 for k in ks):
        raise UsageError("cluster size k must be positive")
    if not args.variance > 0:
        raise UsageError("--variance must be positive")
    summary = _summary_path(args)
    _writable(args.output)
    _writable(summary)
    records = []
    for k in ks:
        records += experiments.case2_trials(k, args.trials, args.seed, args.centers, args.variance,
                                            not args.no_oracle)
    _emit(experiments.records_csv(records), args.output)
    if summary is not None:
        _emit(experiments.summary_csv(experiments.summarize(records)), summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    _writable(args.output)
    solver = verify.faulty_solver if args.inject_fault else None
    failures = verify.run_verification(range(args.seed, args.seed + args.seeds), args.trials,
                                       args.merges, solver)
    report = {"passed": not failures, "failures": [f.to_json() for f in failures]}
    if failures or args.output:
        _emit(json.dumps(report, indent=2) + "\n", args.output)
    if failures:
        for f in failures:
            print(f"FAIL {f.check}: {f.detail}", file=sys.stderr)
        return EXIT_FAIL
    print("all checks passed", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bapkit", description="Bottleneck assignment solver and experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--input", "-i", required=True)
    s.add_argument("--output", "-o")
    s.add_argument("--cold", action="store_true", help="ignore any 'initial' matching in the input")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("merge", help="merge analysis of a split scenario")
    s.add_argument("--input", "-i", required=True)
    s.add_argument("--output", "-o")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--warm", dest="warm", action="store_true",
                   help="also solve warm- and cold-started and report both")
    g.add_argument("--cold", dest="warm", action="store_false")
    s.set_defaults(func=cmd_merge, warm=False)

    for name, help_ in (("case1", "uniform task reassignment trials"),
                        ("case2", "two-cluster trials")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--trials", type=int, default=100)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--output", "-o", help="per-trial CSV (stdout if omitted)")
        s.add_argument("--summary", help="per-size summary CSV (default: <output>_summary.csv)")
        s.add_argument("--no-oracle", action="store_true", help="skip enumeration cross-checks")
        s.set_defaults(func=cmd_case1 if name == "case1" else cmd_case2)
        if name == "case1":
            s.add_argument("--m3", type=int, default=40)
            s.add_argument("--n1", type=int)
            s.add_argument("--n2", type=int)
            s.add_argument("--sizes", type=_int_list,
                           help="comma-separated m3 values, each split n1 = n2 = m3 / 2")
        else:
            s.add_argument("--k", type=int, default=20, help="agents = tasks per cluster")
            s.add_argument("--ks", type=_int_list, help="comma-separated k values")
            s.add_argument("--centers", type=_centers, default=CASE2_CENTERS, help="x1,y1,x2,y2")
            s.add_argument("--variance", type=float, default=CASE2_VARIANCE)

    s = sub.add_parser("verify", help="run the oracle and certificate self-checks")
    s.add_argument("--seed", type=int, default=1, help="first seed of the sweep")
    s.add_argument("--seeds", type=int, default=50, help="number of seeds")
    s.add_argument("--trials", type=int, default=40, help="random instances per seed")
    s.add_argument("--merges", type=int, default=500, help="random merge scenarios")
    s.add_argument("--output", "-o", help="JSON report path")
    s.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be at least 1")
    try:
        return args.func(args)
    except (InputError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
