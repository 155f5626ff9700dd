"""Command-line interface.

    mvfix certify <file> [--mode plain|generalized] [--grid-step p/q]
    mvfix solve <file> [--tol p/q] [--max-iter N] [--x1 value]
    mvfix enumerate <file> [--analytic | --grid p/q]
    mvfix check-classes <file>
    mvfix paper-example <1|2> <certify|solve|enumerate|check-classes> [flags]

Global flags: --format text|records, --seed N (overrides the scenario seed).
Exit status: 0 when certified / a fixed point is found / all checks pass,
1 for VIOLATED / not found / failed checks, 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import MvfixError
from .expressions import parse_rational
from .scenario import (Scenario, builtin_example, parse_scenario, run_certify,
                       run_check_classes, run_enumerate, run_solve)
from .solver import CONVERGED_TO, FIXED_POINT_FOUND


def _add_certify_flags(parser):
    parser.add_argument("--mode", choices=("plain", "generalized"), default="plain")
    parser.add_argument("--grid-step", metavar="p/q")


def _add_solve_flags(parser):
    parser.add_argument("--tol", metavar="p/q")
    parser.add_argument("--max-iter", type=int, metavar="N")
    parser.add_argument("--x1", metavar="value")
    parser.add_argument("--policy", choices=("nearest", "supremum", "random"),
                        default="nearest")


def _add_enumerate_flags(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--analytic", action="store_true", default=True)
    group.add_argument("--grid", metavar="p/q")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvfix",
        description="exact certification and iteration for set-valued contraction scenarios")
    parser.add_argument("--format", choices=("text", "records"), default="text")
    parser.add_argument("--seed", type=int, default=None)
    commands = parser.add_subparsers(dest="command", required=True)

    certify = commands.add_parser("certify", help="certify the contraction inequality")
    certify.add_argument("file")
    _add_certify_flags(certify)

    solve = commands.add_parser("solve", help="run the orbit iteration")
    solve.add_argument("file")
    _add_solve_flags(solve)

    enumerate_cmd = commands.add_parser("enumerate", help="list fixed points")
    enumerate_cmd.add_argument("file")
    _add_enumerate_flags(enumerate_cmd)

    classes = commands.add_parser("check-classes", help="verify the control-function classes")
    classes.add_argument("file")

    paper = commands.add_parser("paper-example", help="run a bundled example scenario")
    paper.add_argument("example", type=int, choices=(1, 2))
    sub = paper.add_subparsers(dest="subcommand", required=True)
    _add_certify_flags(sub.add_parser("certify"))
    _add_solve_flags(sub.add_parser("solve"))
    _add_enumerate_flags(sub.add_parser("enumerate"))
    sub.add_parser("check-classes")
    return parser


def _load_scenario(args) -> Scenario:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise MvfixError(f"cannot read scenario file: {exc}") from exc
    scenario = parse_scenario(text)
    if args.seed is not None:
        scenario.seed = args.seed
    return scenario


def _print_lines(lines):
    for line in lines:
        print(line)


def _do_certify(scenario, args, fmt) -> int:
    grid_step = parse_rational(args.grid_step) if args.grid_step else None
    report = run_certify(scenario, mode=args.mode, grid_step=grid_step)
    if fmt == "records":
        _print_lines(report.to_records())
    else:
        print(report.to_text())
    return 0 if report.certified else 1


def _do_solve(scenario, args, fmt) -> int:
    tol = parse_rational(args.tol) if args.tol else None
    x1 = None
    if args.x1 is not None:
        x1 = args.x1 if scenario.space.is_finite else parse_rational(args.x1)
    orbit = run_solve(scenario, tol=tol, max_iter=args.max_iter, x1=x1,
                      policy=args.policy)
    if fmt == "records":
        _print_lines(orbit.to_records(scenario.name))
    else:
        print(orbit.to_text(scenario.name))
    return 0 if orbit.status in (FIXED_POINT_FOUND, CONVERGED_TO) else 1


def _do_enumerate(scenario, args, fmt) -> int:
    if args.grid is not None:
        result = run_enumerate(scenario, analytic=False, grid_step=parse_rational(args.grid))
    else:
        result = run_enumerate(scenario, analytic=True)
    if scenario.space.is_finite or args.grid is not None:
        points = list(result)
        if fmt == "records":
            mode = "exhaustive" if scenario.space.is_finite else f"grid step={args.grid}"
            print(f"fixed-points scenario={scenario.name} mode={mode} count={len(points)}")
            for x, residual in points:
                print(f"point x={x} residual={residual}")
        else:
            print(f"fixed points of scenario '{scenario.name}': "
                  + (", ".join(str(x) for x, _ in points) if points else "none found"))
        return 0 if points else 1
    pieces = list(result)
    if fmt == "records":
        print(f"fixed-points scenario={scenario.name} mode=analytic count={len(pieces)}")
        for piece in pieces:
            print(f"piece {piece}")
    else:
        rendered = " ∪ ".join(str(p) for p in pieces) if pieces else "none"
        print(f"fixed points of scenario '{scenario.name}': {rendered}")
    return 0 if pieces else 1


def _do_check_classes(scenario, args, fmt) -> int:
    reports = run_check_classes(scenario)
    for report in reports:
        if fmt == "records":
            _print_lines(report.to_records())
        else:
            print(report.to_text())
    return 0 if all(r.passed for r in reports) else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format
    try:
        if args.command == "paper-example":
            scenario = builtin_example(args.example)
            if args.seed is not None:
                scenario.seed = args.seed
            command = args.subcommand
        else:
            scenario = _load_scenario(args)
            command = args.command
        if command == "certify":
            return _do_certify(scenario, args, fmt)
        if command == "solve":
            return _do_solve(scenario, args, fmt)
        if command == "enumerate":
            return _do_enumerate(scenario, args, fmt)
        return _do_check_classes(scenario, args, fmt)
    except MvfixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    try:
        sys.exit(main())
    except BrokenPipeError:
        sys.exit(0)


if __name__ == "__main__":
    entry()
