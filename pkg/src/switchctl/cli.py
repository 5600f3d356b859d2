"""Command-line front end: synth, simulate, verify, demo.

Exit codes: 0 success, 1 usage or parse error, 2 infeasible synthesis,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, dump_json, load_config, load_json
from .errors import InfeasibleError
from .pipeline import synthesis_report, synthesize
from .schedule import Schedule
from .simulate import run_schedule, verify_transfer, write_trajectory

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY = 3


class UsageError(Exception):
    pass


def _out_dir(args, cfg: RunConfig | None = None) -> Path:
    out = args.out or (cfg.out if cfg is not None else None) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _tolerance(args, cfg: RunConfig) -> float:
    return args.tolerance if args.tolerance is not None else cfg.tolerance


def _load_schedule(path, cfg: RunConfig) -> Schedule:
    try:
        sched = Schedule.from_dict(load_json(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if sched.dimension != cfg.dimension:
        raise UsageError(f"dimension mismatch: schedule has {sched.dimension}, config has {cfg.dimension}")
    if sched.circuit is not None and sched.circuit != cfg.circuit.to_dict():
        raise UsageError(f"schedule circuit {sched.circuit} differs from config circuit {cfg.circuit.to_dict()}")
    return sched


def cmd_synth(args) -> int:
    cfg = load_config(args.config)
    algorithm = args.algorithm or cfg.algorithm
    if cfg.dimension == 4 and algorithm != "fourth" or cfg.dimension == 3 and algorithm == "fourth":
        raise UsageError(f"algorithm {algorithm!r} does not fit a {cfg.dimension}-dimensional network")
    sys_ = cfg.system()
    sched = synthesize(cfg.request, sys_, algorithm)
    report = verify_transfer(cfg.request, sys_, sched, _tolerance(args, cfg))
    out = _out_dir(args, cfg)
    dump_json(sched.to_dict(), out / "schedule.json")
    summary = synthesis_report(sched)
    summary["feasible"] = True
    summary["verified"] = report.passed
    summary["verification"] = report.to_dict()
    dump_json(summary, out / "synthesis_report.json")

    print(f"{'k':>3} {'duration':>22} {'power':>22} {'u':>8}")
    for row in summary["pulses"]:
        print(f"{row['k']:>3} {row['duration']:>22.17g} {row['power']:>22.17g} {row['control']:>8.4g}")
    print(f"total duration {sched.total_duration:.17g}, cumulative power {sched.cumulative_power:.17g}")
    print(f"wrote {out / 'schedule.json'} and {out / 'synthesis_report.json'}")
    if not report.passed:
        print("verification failed: " + json.dumps(report.to_dict()), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _simulate(args, write: bool) -> int:
    cfg = load_config(args.config)
    sched = _load_schedule(args.schedule, cfg)
    sys_ = cfg.system()
    tol = _tolerance(args, cfg)
    report = verify_transfer(cfg.request, sys_, sched, tol)
    if write:
        dt = args.sample_dt if args.sample_dt is not None else cfg.sample_dt
        if dt is not None and not dt > 0:
            raise UsageError("--sample-dt must be positive")
        _, rows = run_schedule(cfg.request.x0, sys_, sched, dt)
        out = _out_dir(args, cfg)
        write_trajectory(rows, out / "trajectory.csv")
        dump_json(report.to_dict(), out / "report.json")
        print(f"wrote {out / 'trajectory.csv'} ({len(rows)} samples) and {out / 'report.json'}")
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_simulate(args) -> int:
    return _simulate(args, write=True)


def cmd_verify(args) -> int:
    return _simulate(args, write=False)


def cmd_demo(args) -> int:
    from .demo import load_expected, run_demo

    try:
        expected = load_expected(args.expected)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load expectations: {exc}") from exc
    result = run_demo(expected, out=args.out)
    for c in result.checks:
        print(f"{'ok  ' if c.ok else 'FAIL'} {c.name}  {c.detail}")
    if not result.ok:
        print(f"{len(result.discrepancies)} discrepancies:", file=sys.stderr)
        for d in result.discrepancies:
            print(f"  {d}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"all {len(result.checks)} checks reproduced")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="switchctl", description="Switching schedules for lossless switched networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, schedule: bool):
        p.add_argument("--config", required=True, help="run configuration (JSON)")
        if schedule:
            p.add_argument("--schedule", required=True, help="schedule file written by synth")
        p.add_argument("--tolerance", type=float, help="pass threshold for boundary errors (default 1e-9)")

    p = sub.add_parser("synth", help="synthesize a schedule from a config")
    common(p, schedule=False)
    p.add_argument("--algorithm", choices=["piecewise", "bangbang1", "bangbang2", "fourth"])
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", help="propagate a schedule, write trajectory and report")
    common(p, schedule=True)
    p.add_argument("--sample-dt", type=float, help="trajectory sampling step (default total/1000)")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check a schedule against the config's transfer")
    common(p, schedule=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="reproduce the worked examples")
    p.add_argument("--out", help="also write schedules, reports and trajectories here")
    p.add_argument("--expected", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
