"""Circuit parameters -> drift/control generators on SO(3)/SO(4) and SU(2).

Third order: two capacitors C1, C2 bridged by a switch and inductor L3, state
(sqrt(C1) V1, sqrt(C2) V2, sqrt(L3) I3). Fourth order: L1, C2, L3, C4 with
state (sqrt(L1) I1, sqrt(C2) V2, sqrt(L3) I3, sqrt(C4) V4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lie import Su2Vector


def _check_positive(**params: float) -> None:
    for name, value in params.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ValueError(f"{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class ThirdOrderCircuit:
    C1: float
    C2: float
    L3: float

    def __post_init__(self):
        _check_positive(C1=self.C1, C2=self.C2, L3=self.L3)

    @property
    def omega1(self) -> float:
        return 1.0 / math.sqrt(self.C1 * self.L3)

    @property
    def omega2(self) -> float:
        return 1.0 / math.sqrt(self.C2 * self.L3)

    def to_dict(self) -> dict:
        return {"third": {"C1": self.C1, "C2": self.C2, "L3": self.L3}}


@dataclass(frozen=True, eq=False)
class ThirdOrderSystem:
    """dx/dt = (Atil + Btil u) x and its SU(2) companion dU/dt = (A + B u) U."""

    circuit: ThirdOrderCircuit
    Atil: np.ndarray = field(repr=False)
    Btil: np.ndarray = field(repr=False)
    A: Su2Vector
    B: Su2Vector
    omega1: float
    omega2: float

    dimension = 3

    def generator(self, u: float) -> np.ndarray:
        return self.Atil + u * self.Btil


def network_matrix3(omega1: float, omega2: float, u: float) -> np.ndarray:
    return np.array(
        [
            [0.0, 0.0, omega1 * (1 - u)],
            [0.0, 0.0, omega2 * u],
            [-omega1 * (1 - u), -omega2 * u, 0.0],
        ]
    )


def build_third(circ: ThirdOrderCircuit) -> ThirdOrderSystem:
    w1, w2 = circ.omega1, circ.omega2
    Atil = network_matrix3(w1, w2, 0.0)
    Btil = network_matrix3(w1, w2, 1.0) - Atil
    # A = -(i/2) w1 sy, B = (i/2)(w1 sy + w2 sx)
    A = Su2Vector(0.0, w1, 0.0)
    B = Su2Vector(-w2, -w1, 0.0)
    return ThirdOrderSystem(circ, Atil, Btil, A, B, w1, w2)


@dataclass(frozen=True)
class FourthOrderCircuit:
    L1: float
    C2: float
    L3: float
    C4: float

    def __post_init__(self):
        _check_positive(L1=self.L1, C2=self.C2, L3=self.L3, C4=self.C4)

    @property
    def nu(self) -> float:
        return 1.0 / math.sqrt(self.L1 * self.C2)

    @property
    def beta(self) -> float:
        return 1.0 / math.sqrt(self.L3 * self.C4)

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(self.L1 * self.C4)

    @property
    def delta(self) -> float:
        return 1.0 / math.sqrt(self.L3 * self.C2)

    def to_dict(self) -> dict:
        return {"fourth": {"L1": self.L1, "C2": self.C2, "L3": self.L3, "C4": self.C4}}


@dataclass(frozen=True, eq=False)
class FourthOrderSystem:
    """dx/dt = (Atil + Btil u) x and the two SU(2) systems sharing u."""

    circuit: FourthOrderCircuit
    Atil: np.ndarray = field(repr=False)
    Btil: np.ndarray = field(repr=False)
    A1: Su2Vector
    B1: Su2Vector
    A2: Su2Vector
    B2: Su2Vector

    dimension = 4

    def generator(self, u: float) -> np.ndarray:
        return self.Atil + u * self.Btil


def build_fourth(circ: FourthOrderCircuit) -> FourthOrderSystem:
    nu, beta, gamma, delta = circ.nu, circ.beta, circ.gamma, circ.delta
    Atil = np.array(
        [
            [0.0, -nu, 0.0, 0.0],
            [nu, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -beta],
            [0.0, 0.0, beta, 0.0],
        ]
    )
    Btil = np.array(
        [
            [0.0, 0.0, 0.0, gamma],
            [0.0, 0.0, delta, 0.0],
            [0.0, -delta, 0.0, 0.0],
            [-gamma, 0.0, 0.0, 0.0],
        ]
    )
    # i(x/2) sz  <->  (0, 0, -x);  i(x/2) sx  <->  (-x, 0, 0)
    A1 = Su2Vector(0.0, 0.0, -(nu + beta))
    B1 = Su2Vector(gamma + delta, 0.0, 0.0)
    A2 = Su2Vector(0.0, 0.0, -(beta - nu))
    B2 = Su2Vector(-(gamma - delta), 0.0, 0.0)
    return FourthOrderSystem(circ, Atil, Btil, A1, B1, A2, B2)


RESONANCE_RTOL = 1e-9


@dataclass(frozen=True)
class Resonance:
    mode: str
    k: int | None
    note: str = ""


def check_resonance(circ: FourthOrderCircuit, mode: str) -> Resonance:
    """Test the cc1/cc2 relation between (nu+beta)/(beta-nu) and (gamma+delta)/(delta-gamma)."""
    if mode not in ("cc1", "cc2"):
        raise ValueError(f"mode must be 'cc1' or 'cc2', got {mode!r}")
    nu, beta, gamma, delta = circ.nu, circ.beta, circ.gamma, circ.delta
    if math.isclose(beta, nu, rel_tol=RESONANCE_RTOL):
        return Resonance(mode, None, "degenerate: beta == nu")
    if math.isclose(delta, gamma, rel_tol=RESONANCE_RTOL):
        return Resonance(mode, None, "degenerate: delta == gamma")
    r1 = (nu + beta) / (beta - nu)
    r2 = (gamma + delta) / (delta - gamma)
    if mode == "cc2":
        r2 = -r2
    k = round((r1 - 1) / 2)
    target = 2 * k + 1
    if k < 1:
        return Resonance(mode, None, f"(nu+beta)/(beta-nu) = {r1:.12g} is not 2k+1 with k >= 1")
    if not math.isclose(r1, target, rel_tol=RESONANCE_RTOL):
        return Resonance(mode, None, f"(nu+beta)/(beta-nu) = {r1:.12g} is not an odd integer >= 3")
    if not math.isclose(r2, target, rel_tol=RESONANCE_RTOL):
        side = "(gamma+delta)/(delta-gamma)" if mode == "cc1" else "-(gamma+delta)/(delta-gamma)"
        return Resonance(mode, None, f"{side} = {r2:.12g} != {target}")
    return Resonance(mode, k)


def resonance_k(circ: FourthOrderCircuit, mode: str) -> int | None:
    return check_resonance(circ, mode).k


def resonant_circuit(k: int, mode: str, L3: float = 1.0, C4: float = 1.0) -> FourthOrderCircuit:
    """A circuit satisfying cc1 or cc2 for the given k.

    cc1 forces C2 = C4 and L1/L3 = ((k+1)/k)^2; cc2 forces L1 = L3 and
    C2/C4 = ((k+1)/k)^2.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ratio = ((k + 1) / k) ** 2
    if mode == "cc1":
        return FourthOrderCircuit(L1=L3 * ratio, C2=C4, L3=L3, C4=C4)
    if mode == "cc2":
        return FourthOrderCircuit(L1=L3, C2=C4 * ratio, L3=L3, C4=C4)
    raise ValueError(f"mode must be 'cc1' or 'cc2', got {mode!r}")
