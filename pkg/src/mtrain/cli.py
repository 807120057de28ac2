"""mtrain command line.

Subcommands: validate, inspect, serve, simulate, report. Exit codes: 0 on
success, 1 when validation (or input data) fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import MtrainError, ParseError
from .metrics import (
    effectiveness_report,
    metrics_to_json,
    render_report_table,
    report_to_json,
)
from .model import CoursePackage
from .package_io import parse_package
from .session import log_to_json
from .simulate import (
    DEFAULT_STEP_VIEW_SECONDS,
    PolicyKind,
    TraineePolicy,
    simulate_trainee,
)
from .validation import required_resources, validate_package

_POLICY_NAMES = {
    "perfect": PolicyKind.PERFECT,
    "random": PolicyKind.RANDOM,
    "error-prone": PolicyKind.ERROR_PRONE,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtrain",
        description="Interactive-3D maintenance training courseware tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a package for integrity errors")
    p_validate.add_argument("package", help="package directory")

    p_inspect = sub.add_parser("inspect", help="summarize a package")
    p_inspect.add_argument("package", help="package directory")

    p_serve = sub.add_parser("serve", help="host a courseware directory over HTTP")
    p_serve.add_argument(
        "courseware_dir",
        nargs="?",
        default=os.environ.get("MTRAIN_COURSEWARE_DIR"),
        help="directory of packages (default: $MTRAIN_COURSEWARE_DIR)",
    )
    p_serve.add_argument("--bind", default="127.0.0.1:8000", help="host:port to bind")

    p_sim = sub.add_parser("simulate", help="run a headless trainee through a package")
    p_sim.add_argument("package", help="package directory")
    p_sim.add_argument("--procedure", required=True, help="procedure id")
    p_sim.add_argument(
        "--policy", choices=sorted(_POLICY_NAMES), default="perfect", help="trainee policy"
    )
    p_sim.add_argument("--seed", type=int, default=0, help="seed for seeded policies")
    p_sim.add_argument(
        "--error-rate", type=float, default=0.1, help="error probability (error-prone)"
    )
    p_sim.add_argument(
        "--step-view-seconds",
        type=float,
        default=DEFAULT_STEP_VIEW_SECONDS,
        help="simulated seconds charged per playback step",
    )
    p_sim.add_argument("--events", action="store_true", help="also print the event log")

    p_report = sub.add_parser("report", help="compute the effort-saved report")
    p_report.add_argument("--baseline", required=True, help="baseline times JSON file")
    p_report.add_argument("--observed", required=True, help="observed times JSON file")
    p_report.add_argument(
        "--expect", help="previously published percentages to cross-check"
    )
    p_report.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    return parser


def _load_package(path: str) -> CoursePackage:
    return parse_package(Path(path))


def cmd_validate(args: argparse.Namespace) -> int:
    pkg = _load_package(args.package)
    report = validate_package(pkg)
    print(report.render())
    return 0 if report.ok else 1


def cmd_inspect(args: argparse.Namespace) -> int:
    pkg = _load_package(args.package)
    print(f"course:      {pkg.course_id}")
    print(f"title:       {pkg.title}")
    print(f"dim opacity: {pkg.dim_opacity}")
    print(f"assets:      {len(pkg.asset_index)}")
    print(f"assembly:    {pkg.assembly.name} ({len(pkg.assembly.parts)} parts)")
    for part in pkg.assembly.parts:
        print(f"  {part.part_number}  {part.nomenclature}")
    for proc in pkg.procedures:
        print(f"procedure:   {proc.procedure_id} [{proc.direction.value}] "
              f"{len(proc.steps)} steps")
        res = required_resources(proc)
        if res.tools:
            print(f"  tools:       {', '.join(res.tools)}")
        if res.consumables:
            print(f"  consumables: {', '.join(res.consumables)}")
        if res.spares:
            print(f"  spares:      {', '.join(res.spares)}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import CoursewareDirectoryError, serve

    if not args.courseware_dir:
        print(
            "no courseware directory given (argument or $MTRAIN_COURSEWARE_DIR)",
            file=sys.stderr,
        )
        return 2
    try:
        serve(args.courseware_dir, args.bind)
    except CoursewareDirectoryError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    pkg = _load_package(args.package)
    report = validate_package(pkg)
    if not report.ok:
        print(report.render())
        return 1
    policy = TraineePolicy(
        _POLICY_NAMES[args.policy], seed=args.seed, error_rate=args.error_rate
    )
    session, metrics = simulate_trainee(
        pkg, args.procedure, policy, step_view_seconds=args.step_view_seconds
    )
    out = {
        "session_id": session.session_id,
        "procedure_id": session.procedure_id,
        "policy": policy.kind.value,
        "seed": policy.seed,
        "metrics": metrics_to_json(metrics),
    }
    if args.events:
        out["events"] = log_to_json(session)
    print(json.dumps(out, indent=2))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    from .service import parse_expect_json, parse_times_json

    baseline = parse_times_json(_read_json(args.baseline), source=args.baseline)
    observed = parse_times_json(_read_json(args.observed), source=args.observed)
    expected = None
    if args.expect:
        expected = parse_expect_json(_read_json(args.expect), source=args.expect)
    report = effectiveness_report(baseline, observed, expected)
    if args.json:
        print(json.dumps(report_to_json(report), indent=2))
    else:
        print(render_report_table(report))
    return 0


def _read_json(path: str):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "inspect": cmd_inspect,
        "serve": cmd_serve,
        "simulate": cmd_simulate,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (MtrainError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
