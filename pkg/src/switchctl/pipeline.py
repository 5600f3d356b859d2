"""End-to-end synthesis: request -> targets -> factors -> schedule."""

from __future__ import annotations

import math

import numpy as np

from .errors import InfeasibleError
from .factorize import ALGORITHMS, euler_branch_sign, fourth_order_factorize, third_order_factors
from .lie import exp_su2, su2_of_quat
from .network import FourthOrderSystem, ThirdOrderSystem
from .schedule import Schedule, compile_fourth, compile_schedule
from .targets import TransferRequest, fourth_order_targets, so3_target


def leg_targets(request: TransferRequest) -> list[np.ndarray]:
    """SU(2) target of each third-order leg."""
    pts = request.points
    out = []
    for i, policy in enumerate(request.legs):
        explicit = policy.su2 if policy.policy == "explicit" else None
        v, _ = so3_target(pts[i], pts[i + 1], explicit)
        out.append(exp_su2(v))
    return out


def synthesize(request: TransferRequest, sys, algorithm: str, shortcut: bool = True) -> Schedule:
    if isinstance(sys, FourthOrderSystem):
        if algorithm != "fourth":
            raise ValueError(f"fourth-order networks use algorithm 'fourth', got {algorithm!r}")
        if request.waypoints:
            raise InfeasibleError("unsupported-target", "fourth-order transfers take no waypoints")
        target = fourth_order_targets(request.xf, sys, x0=request.x0)
        plist, qlist = fourth_order_factorize(target, sys)
        return compile_fourth(plist, qlist, sys)

    if not isinstance(sys, ThirdOrderSystem):
        raise TypeError(f"unsupported system {type(sys).__name__}")
    if algorithm not in ALGORITHMS:
        raise ValueError(f"third-order algorithm must be one of {ALGORITHMS}, got {algorithm!r}")
    segments = []
    for policy, T in zip(request.legs, leg_targets(request)):
        if policy.euler is not None and algorithm == "bangbang2":
            if euler_branch_sign(*policy.euler, T) is None:
                raise ValueError(f"euler angles {policy.euler} do not rebuild the leg target (up to sign)")
        overridden = policy.theta1 is not None or (policy.euler is not None and algorithm == "bangbang2")
        segments.append(
            third_order_factors(
                T,
                sys,
                algorithm,
                theta1=policy.theta1,
                euler=policy.euler,
                shortcut=shortcut and not overridden,
            )
        )
    mode = "piecewise" if algorithm == "piecewise" else "bangbang"
    return compile_schedule(segments, sys, mode=mode, algorithm=algorithm)


def pulse_table(schedule: Schedule) -> list[dict]:
    return [
        {"k": i + 1, "duration": p.duration, "power": p.power, "control": p.control}
        for i, p in enumerate(schedule.pulses)
    ]


def synthesis_report(schedule: Schedule) -> dict:
    return {
        "algorithm": schedule.algorithm,
        "mode": schedule.mode,
        "pulses": pulse_table(schedule),
        "total_duration": schedule.total_duration,
        "cumulative_power": schedule.cumulative_power,
        "bangbang": schedule.is_bangbang,
        "pulse_cost": {
            "sum_sqrt_a2_b2": schedule.pulse_cost,
            "per_pulse": [math.hypot(p.duration, p.power) for p in schedule.pulses],
        },
    }


def random_su2(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    return su2_of_quat(q / np.linalg.norm(q))


def compare_pulse_costs(sys: ThirdOrderSystem, n: int = 100, seed: int = 0) -> dict:
    """Sum of sqrt(a^2 + b^2) for the piecewise (two-V) and x-y-x Euler schedules.

    Runs both factorizations on `n` Haar-random SU(2) targets, without the
    single-pulse shortcut, and reports the per-target costs side by side.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        T = random_su2(rng)
        costs = {}
        for alg in ("piecewise", "bangbang2"):
            sched = compile_schedule([third_order_factors(T, sys, alg, shortcut=False)], sys)
            costs[alg] = {
                "cumulative": sched.pulse_cost,
                "max_pulse": max((math.hypot(p.duration, p.power) for p in sched.pulses), default=0.0),
                "n_pulses": len(sched.pulses),
            }
        rows.append(costs)
    pw = np.array([r["piecewise"]["cumulative"] for r in rows])
    eu = np.array([r["bangbang2"]["cumulative"] for r in rows])
    return {
        "n_targets": n,
        "seed": seed,
        "piecewise_mean": float(pw.mean()),
        "euler_mean": float(eu.mean()),
        "piecewise_median": float(np.median(pw)),
        "euler_median": float(np.median(eu)),
        "fraction_piecewise_lower": float(np.mean(pw < eu)),
        "targets": rows,
    }
