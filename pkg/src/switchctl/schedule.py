"""Factor lists -> time-ordered pulse schedules (duration, control).

A pulse holds the switch at a constant value u for a duration a > 0; its
power is b = u * a. For the third-order network a pulse realizes
exp(a A + b B) = exp[b (w2/2) i sx + (b - a)(w1/2) i sy].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError
from .factorize import Factor, coefficient_mismatch
from .lie import exp_su2
from .network import FourthOrderSystem, ThirdOrderSystem

TWO_PI = 2 * math.pi
ZERO_ANGLE = 1e-12
CONTROL_SNAP = 1e-9


@dataclass(frozen=True)
class Pulse:
    duration: float
    control: float

    def __post_init__(self):
        object.__setattr__(self, "duration", float(self.duration))
        object.__setattr__(self, "control", float(self.control))
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise ValueError(f"pulse duration must be positive and finite, got {self.duration!r}")
        if not math.isfinite(self.control):
            raise ValueError(f"pulse control must be finite, got {self.control!r}")

    @classmethod
    def from_power(cls, duration: float, power: float) -> Pulse:
        return cls(duration, power / duration)

    @property
    def power(self) -> float:
        return self.control * self.duration

    @property
    def is_bangbang(self) -> bool:
        return self.control == 0.0 or self.control == 1.0


@dataclass
class Schedule:
    """Pulses in execution order; `leg_ends[i]` counts the pulses up to the end of leg i."""

    dimension: int
    pulses: list[Pulse] = field(default_factory=list)
    mode: str = "piecewise"
    leg_ends: list[int] | None = None
    circuit: dict | None = None
    algorithm: str | None = None

    @property
    def total_duration(self) -> float:
        return math.fsum(p.duration for p in self.pulses)

    @property
    def cumulative_power(self) -> float:
        return math.fsum(abs(p.power) for p in self.pulses)

    @property
    def pulse_cost(self) -> float:
        """Sum over pulses of sqrt(a^2 + b^2)."""
        return math.fsum(math.hypot(p.duration, p.power) for p in self.pulses)

    @property
    def is_bangbang(self) -> bool:
        return all(p.is_bangbang for p in self.pulses)

    def to_dict(self) -> dict:
        d = {
            "dimension": self.dimension,
            "mode": self.mode,
            "pulses": [{"duration": p.duration, "control": p.control} for p in self.pulses],
        }
        if self.circuit is not None:
            d["circuit"] = self.circuit
        if self.leg_ends is not None:
            d["legs"] = list(self.leg_ends)
        if self.algorithm is not None:
            d["algorithm"] = self.algorithm
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Schedule:
        try:
            pulses = [Pulse(float(p["duration"]), float(p["control"])) for p in d["pulses"]]
            dimension = int(d["dimension"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed schedule: missing or invalid field {exc}") from exc
        legs = d.get("legs")
        return cls(
            dimension=dimension,
            pulses=pulses,
            mode=d.get("mode", "piecewise"),
            leg_ends=None if legs is None else [int(v) for v in legs],
            circuit=d.get("circuit"),
            algorithm=d.get("algorithm"),
        )


def pulse_from_gamma(gamma: complex, sys: ThirdOrderSystem) -> Pulse:
    """The pulse realizing V(gamma): b = 2 Re(gamma)/w2, a = b + 2 Im(gamma)/w1."""
    b = 2 * gamma.real / sys.omega2
    a = b + 2 * gamma.imag / sys.omega1
    if not a > 0:
        raise InfeasibleError(
            "half-plane",
            f"gamma = {gamma!r} gives duration {a:.6g}; needs Im g > -(w1/w2) Re g "
            f"(w1/w2 = {sys.omega1 / sys.omega2:.6g})",
        )
    return Pulse.from_power(a, b)


def _shift_nonpositive(theta: float) -> float:
    """theta moved by whole turns into (-2 pi, 0]."""
    r = math.fmod(theta, TWO_PI)
    if r > 0:
        r -= TWO_PI
    return r


def canonicalize_angle(factor: Factor, sys: ThirdOrderSystem) -> Pulse | None:
    """Pulse for exp(i theta sy) (free evolution) or exp(i theta sx) (u = 1).

    Free evolution only produces theta < 0 and the u = 1 pulse only theta > 0,
    so the angle is moved by whole turns into (-2 pi, 0] or [0, 2 pi).
    Returns None for a factor that is the identity.
    """
    theta = factor.angle
    if factor.kind == "y":
        theta = _shift_nonpositive(theta)
        if abs(theta) < ZERO_ANGLE:
            return None
        return Pulse(-2 * theta / sys.omega1, 0.0)
    if factor.kind == "x":
        theta = -_shift_nonpositive(-theta)
        if abs(theta) < ZERO_ANGLE:
            return None
        return Pulse(2 * theta / sys.omega2, 1.0)
    raise ValueError(f"canonicalize_angle takes x or y factors, got {factor.kind!r}")


def factor_to_pulse(factor: Factor, sys) -> Pulse | None:
    if factor.kind == "mixed":
        return Pulse.from_power(factor.drift, factor.control)
    if not isinstance(sys, ThirdOrderSystem):
        raise ValueError(f"{factor.kind!r} factors are only realizable on the third-order network")
    if factor.kind == "v":
        if factor.gamma == 0:
            return None
        return pulse_from_gamma(factor.gamma, sys)
    if factor.kind in ("x", "y"):
        return canonicalize_angle(factor, sys)
    raise ValueError("z factors must be decomposed before scheduling")


def _check_bangbang(pulses: list[Pulse]) -> None:
    for i, p in enumerate(pulses):
        if not p.is_bangbang:
            raise InfeasibleError(
                "bang-bang",
                f"pulse {i} (duration {p.duration:.6g}, power {p.power:.6g}) has control u = {p.control:.6g}",
            )


def compile_schedule(segments: list[list[Factor]], sys, mode: str = "piecewise", algorithm: str | None = None) -> Schedule:
    """Concatenate per-leg factor lists into one execution-order schedule."""
    if mode not in ("piecewise", "bangbang"):
        raise ValueError(f"mode must be 'piecewise' or 'bangbang', got {mode!r}")
    pulses: list[Pulse] = []
    leg_ends: list[int] = []
    for factors in segments:
        for f in reversed(factors):
            p = factor_to_pulse(f, sys)
            if p is not None:
                pulses.append(p)
        leg_ends.append(len(pulses))
    if mode == "bangbang":
        _check_bangbang(pulses)
    return Schedule(
        dimension=sys.dimension,
        pulses=pulses,
        mode=mode,
        leg_ends=leg_ends,
        circuit=sys.circuit.to_dict(),
        algorithm=algorithm,
    )


def compile_fourth(plist: list[Factor], qlist: list[Factor], sys: FourthOrderSystem, tol: float = 1e-10) -> Schedule:
    """Schedule shared by both SU(2) subsystems; the coefficient lists must agree."""
    mismatch = coefficient_mismatch(plist, qlist)
    if mismatch > tol:
        raise InfeasibleError("resonance", f"p- and q-factor coefficients differ by {mismatch:.3g}")
    pulses = []
    for f in reversed(plist):
        u = f.control / f.drift
        for level in (0.0, 1.0):
            if abs(u - level) < CONTROL_SNAP:
                u = level
        pulses.append(Pulse(f.drift, u))
    mode = "bangbang" if all(p.is_bangbang for p in pulses) else "piecewise"
    return Schedule(4, pulses, mode, [len(pulses)], sys.circuit.to_dict(), "fourth")


def schedule_su2_product(schedule: Schedule, generators) -> np.ndarray:
    """prod exp(a_k A + b_k B) in written order (last pulse leftmost)."""
    A, B = generators
    out = np.eye(2, dtype=complex)
    for p in schedule.pulses:
        out = exp_su2(A * p.duration + B * p.power) @ out
    return out
