"""Regenerate the worked examples and diff them against stored expectations.

Third order: the C1=0.1, C2=0.2, L3=0.5 network carried from (1,0,0) to
(0,-1,0) through two waypoints, with the middle leg's coefficient table for
each algorithm. Fourth order: the k=1 cc1, cc2 and free-evolution transfers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .config import dump_json, parse_circuit
from .lie import Su2Vector
from .network import build_fourth, build_third
from .pipeline import synthesis_report, synthesize
from .schedule import Schedule
from .simulate import run_schedule, verify_transfer, write_trajectory
from .targets import LegPolicy, TransferRequest


def load_expected(path=None) -> dict:
    if path is None:
        text = resources.files("switchctl").joinpath("data/demo_expected.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return json.loads(text)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class DemoResult:
    checks: list[Check] = field(default_factory=list)
    schedules: dict[str, Schedule] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def discrepancies(self) -> list[str]:
        return [f"{c.name}: {c.detail}" for c in self.checks if not c.ok]

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))


def leg_pulses(schedule: Schedule, leg: int, order: str = "time") -> list[tuple[float, float]]:
    """(duration, power) rows of one leg, in time order or written (product) order."""
    ends = [0, *schedule.leg_ends]
    rows = [(p.duration, p.power) for p in schedule.pulses[ends[leg] : ends[leg + 1]]]
    return rows[::-1] if order == "written" else rows


def _compare_rows(result: DemoResult, name: str, got, want, tol: float) -> None:
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    if got.shape != want.shape:
        result.add(name, False, f"expected {want.shape[0]} rows, got {got.shape[0]}: {got.tolist()}")
        return
    err = float(np.max(np.abs(got - want))) if got.size else 0.0
    detail = f"max deviation {err:.3g} (tolerance {tol:g})"
    if err > tol:
        detail += f"; got {got.tolist()}, expected {want.tolist()}"
    result.add(name, err <= tol, detail)


def _third_request(exp: dict, leg2: LegPolicy) -> TransferRequest:
    x0, w1, w2, xf = exp["points"]
    return TransferRequest(3, x0, xf, (w1, w2), (LegPolicy(), leg2, LegPolicy()))


def _third_order(result: DemoResult, exp: dict, out: Path | None) -> None:
    sys = build_third(parse_circuit(exp["circuit"]))
    su2 = Su2Vector(*exp["leg2_su2"])
    tol_transfer = exp["transfer_tolerance"]
    single = exp["single_pulse_legs"]

    for alg, table in exp["tables"].items():
        leg2 = LegPolicy(
            "explicit",
            su2,
            theta1=(table["theta1"],) if "theta1" in table else None,
            euler=tuple(table["euler"]) if "euler" in table else None,
        )
        request = _third_request(exp, leg2)
        sched = synthesize(request, sys, alg)
        result.schedules[alg] = sched

        _compare_rows(result, f"{alg} table", leg_pulses(sched, 1, table["order"]), table["rows"], table["tolerance"])
        if "closed_form" in table:
            _compare_rows(
                result,
                f"{alg} closed form",
                leg_pulses(sched, 1, table["order"]),
                table["closed_form"],
                table["closed_form_tolerance"],
            )
        _compare_rows(result, f"{alg} leg 1", leg_pulses(sched, 0), [single["leg1"]], single["tolerance"])
        _compare_rows(result, f"{alg} leg 3", leg_pulses(sched, 2), [single["leg3"]], single["tolerance"])

        report = verify_transfer(request, sys, sched, tol_transfer)
        errs = [report.endpoint_error, *report.waypoint_errors]
        result.add(
            f"{alg} transfer",
            report.passed,
            f"boundary errors {[f'{e:.2e}' for e in errs]}, norm drift {report.max_norm_drift:.2e}",
        )
        if alg != "piecewise":
            result.add(f"{alg} bang-bang", sched.is_bangbang, "" if sched.is_bangbang else "non-binary control")

        if out is not None:
            _write_outputs(out / alg, request, sys, sched, report)


def _fourth_order(result: DemoResult, exp: dict, out: Path | None) -> None:
    for case in exp["fourth"]:
        name = f"fourth {case['name']}"
        sys = build_fourth(parse_circuit(case["circuit"]))
        request = TransferRequest(4, [1.0, 0.0, 0.0, 0.0], case["y"])
        sched = synthesize(request, sys, "fourth")
        result.schedules[case["name"]] = sched
        report = verify_transfer(request, sys, sched, case["tolerance"])
        result.add(f"{name} transfer", report.passed, f"endpoint error {report.endpoint_error:.2e}")
        if case.get("bangbang"):
            result.add(f"{name} bang-bang", sched.is_bangbang, "" if sched.is_bangbang else "non-binary control")
        if "duration" in case:
            dev = abs(sched.total_duration - case["duration"])
            result.add(f"{name} duration", dev <= 1e-12, f"duration {sched.total_duration!r}, expected {case['duration']!r}")
        if out is not None:
            _write_outputs(out / f"fourth_{case['name']}", request, sys, sched, report)


def _write_outputs(folder: Path, request, sys, sched: Schedule, report) -> None:
    folder.mkdir(parents=True, exist_ok=True)
    dump_json(sched.to_dict(), folder / "schedule.json")
    dump_json(synthesis_report(sched), folder / "synthesis_report.json")
    dump_json(report.to_dict(), folder / "report.json")
    _, rows = run_schedule(request.x0, sys, sched)
    write_trajectory(rows, folder / "trajectory.csv")


def run_demo(expected: dict | None = None, out=None) -> DemoResult:
    exp = load_expected() if expected is None else expected
    out = None if out is None else Path(out)
    result = DemoResult()
    _third_order(result, exp, out)
    _fourth_order(result, exp, out)
    return result
