"""Command-line interface.

    hcdfg-metrics [analyze] FILE... [--profile P] [--costs C] [--thresholds T]
                  [--format table|json|csv] [--levels N] [--dot-dir DIR] [--jobs N]
                  [--projection FUNC --points N]
    hcdfg-metrics graph FILE... [--format dot|json] [--dot-dir DIR]
    hcdfg-metrics project FILE --function FUNC [--points N] [--format csv|gnuplot|json]

Exit status: 0 on success, 1 when some function could not be analyzed,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .analysis import Failure, analyze_paths, build, load_units
from .errors import AnalysisError, ConfigError
from .graph import export_graph
from .guidance import Thresholds
from .metrics import CostTable, Profile
from .projection import tradeoff_curve
from .report import FORMATS, build_report, emit_report

EXIT_OK, EXIT_ANALYSIS, EXIT_USAGE = 0, 1, 2
COMMANDS = ("analyze", "graph", "project")


class UsageError(Exception):
    pass


def _config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--profile", help="TOML file with trip counts and branch probabilities")
    p.add_argument("--costs", help="TOML cost table (cycles per operator)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hcdfg-metrics", description="Parallelism, memory and control metrics of C functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")

    a = sub.add_parser("analyze", help="characterize and classify every function (default)")
    a.add_argument("inputs", nargs="+", metavar="FILE")
    _config_args(a)
    a.add_argument("--thresholds", help="TOML file overriding the classification thresholds")
    a.add_argument("--format", default="table", choices=FORMATS)
    a.add_argument("--levels", type=int, metavar="N", help="include sub-graphs down to depth N")
    a.add_argument("--dot-dir", help="also write one DOT graph per function here")
    a.add_argument("--jobs", type=int, default=1, metavar="N", help="functions analyzed concurrently")
    a.add_argument("--projection", metavar="FUNC", help="append the trade-off curve of FUNC")
    a.add_argument("--points", type=int, default=10, metavar="N", help="trade-off curve points")
    a.add_argument("-o", "--output", help="write the report here instead of stdout")

    g = sub.add_parser("graph", help="export graphs only")
    g.add_argument("inputs", nargs="+", metavar="FILE")
    g.add_argument("--format", default="dot", choices=("dot", "json"))
    g.add_argument("--dot-dir", help="write one file per function here instead of stdout")

    pr = sub.add_parser("project", help="delay/resource trade-off curve of one function")
    pr.add_argument("inputs", nargs=1, metavar="FILE")
    pr.add_argument("--function", required=True)
    _config_args(pr)
    pr.add_argument("--points", type=int, default=10, metavar="N")
    pr.add_argument("--format", default="csv", choices=("csv", "gnuplot", "json"))
    pr.add_argument("-o", "--output", help="write the curve here instead of stdout")
    return parser


def _load_configs(args) -> tuple[CostTable, Profile, Thresholds]:
    costs = CostTable.load(args.costs) if getattr(args, "costs", None) else CostTable()
    profile = Profile.load(args.profile) if getattr(args, "profile", None) else Profile()
    th = Thresholds.load(args.thresholds) if getattr(args, "thresholds", None) else Thresholds()
    return costs, profile, th


def _write(data: bytes, output: Optional[str], stdout) -> None:
    if output:
        Path(output).write_bytes(data)
    else:
        stdout.write(data.decode("utf-8"))


def _diagnose(failures: list[Failure], stderr) -> None:
    for f in failures:
        stderr.write(f"error: {f}\n")
    if failures:
        stderr.write(f"{len(failures)} failure(s)\n")


def _curve(units, name: str, costs: CostTable, profile: Profile, points: int):
    for u in units:
        for fn in u.functions:
            if fn.name == name:
                return tradeoff_curve(build(u, fn), costs=costs, n_points=points, profile=profile)
    raise UsageError(f"no function named {name!r} in the inputs")


def _analyze(args, stdout, stderr) -> int:
    if args.jobs < 1 or args.points < 2 or (args.levels is not None and args.levels < 0):
        raise UsageError("--jobs must be >= 1, --points >= 2 and --levels >= 0")
    costs, profile, th = _load_configs(args)
    analyses, failures = analyze_paths(args.inputs, costs, profile, th, args.jobs)
    config = {
        "inputs": list(args.inputs),
        "costs": costs.to_dict(),
        "profile": profile.to_dict(),
        "thresholds": th.to_dict(),
        "levels": args.levels,
    }
    projection = None
    if args.projection:
        units, _ = load_units(args.inputs)
        curve = _curve(units, args.projection, costs, profile, args.points)
        projection = {**curve.to_dict(), "csv": curve.to_csv()}
        config["projection"] = {"function": args.projection, "points": args.points}
    if args.dot_dir:
        os.makedirs(args.dot_dir, exist_ok=True)
        for a in analyses:
            Path(args.dot_dir, f"{a.name}.dot").write_bytes(export_graph(a.hcdfg, "dot"))
    report = build_report(analyses, failures, config, th, args.levels, projection)
    _write(emit_report(report, args.format), args.output, stdout)
    _diagnose(failures, stderr)
    return EXIT_ANALYSIS if failures else EXIT_OK


def _graph(args, stdout, stderr) -> int:
    units, failures = load_units(args.inputs)
    if args.dot_dir:
        os.makedirs(args.dot_dir, exist_ok=True)
    for u in units:
        for fn in u.functions:
            try:
                data = export_graph(build(u, fn), args.format)
            except AnalysisError as exc:
                failures.append(Failure(u.file, fn.name, str(exc)))
                continue
            if args.dot_dir:
                Path(args.dot_dir, f"{fn.name}.{args.format}").write_bytes(data)
            else:
                stdout.write(data.decode("utf-8"))
    _diagnose(failures, stderr)
    return EXIT_ANALYSIS if failures else EXIT_OK


def _project(args, stdout, stderr) -> int:
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    costs, profile, _ = _load_configs(args)
    units, failures = load_units(args.inputs)
    if failures:
        _diagnose(failures, stderr)
        return EXIT_ANALYSIS
    try:
        curve = _curve(units, args.function, costs, profile, args.points)
    except AnalysisError as exc:
        _diagnose([Failure(args.inputs[0], args.function, str(exc))], stderr)
        return EXIT_ANALYSIS
    if args.format == "csv":
        data = curve.to_csv()
    elif args.format == "gnuplot":
        data = curve.to_gnuplot()
    else:
        data = json.dumps(curve.to_dict(), indent=2, sort_keys=True) + "\n"
    _write(data.encode("utf-8"), args.output, stdout)
    return EXIT_OK


def main(argv: Optional[list] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] not in COMMANDS and argv[0] not in ("-h", "--help", "--version"):
        argv.insert(0, "analyze")
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(stderr)
        return EXIT_USAGE
    handler = {"analyze": _analyze, "graph": _graph, "project": _project}[args.command]
    try:
        return handler(args, stdout, stderr)
    except (ConfigError, UsageError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
