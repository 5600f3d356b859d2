"""Turn requested state transfers into group-element targets.

Third order: each leg x_i -> x_{i+1} becomes an su(2) vector whose rotation
maps x_i onto x_{i+1}, plus its two SU(2) preimages. Fourth order: the
transfer e1 -> y becomes a pair (p, q) of SU(2) targets with p q^-1 = y as
quaternions, for the three targets that have closed-form constructions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import InfeasibleError
from .lie import (
    CayleyKlein,
    Su2Vector,
    ZERO,
    cayley_klein_of,
    ck_to_matrix,
    exp_pauli,
    phi_tilde,
    rodrigues,
)
from .network import FourthOrderSystem, check_resonance

UNIT_TOL = 1e-10
MAP_TOL = 1e-10


@dataclass(frozen=True)
class LegPolicy:
    """How one leg's target is chosen, plus optional factorization overrides.

    `theta1` fixes the first phase of each two-factor z decomposition
    (piecewise algorithm); `euler` fixes (D, E, F) for the x-y-x algorithm.
    """

    policy: str = "geodesic"
    su2: Su2Vector | None = None
    theta1: tuple[float, ...] | None = None
    euler: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.policy not in ("geodesic", "explicit"):
            raise ValueError(f"unknown target policy {self.policy!r}")
        if self.policy == "explicit" and self.su2 is None:
            raise ValueError("explicit policy needs an su2 vector (a, b, c)")


def _as_unit(x, name: str, dim: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (dim,):
        raise ValueError(f"{name} must have {dim} entries, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or abs(np.linalg.norm(arr) - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} must be a unit vector (norm {np.linalg.norm(arr):.17g})")
    return arr


@dataclass(frozen=True, eq=False)
class TransferRequest:
    dimension: int
    x0: np.ndarray
    xf: np.ndarray
    waypoints: tuple[np.ndarray, ...] = ()
    legs: tuple[LegPolicy, ...] = field(default=())

    def __post_init__(self):
        if self.dimension not in (3, 4):
            raise ValueError(f"dimension must be 3 or 4, got {self.dimension}")
        object.__setattr__(self, "x0", _as_unit(self.x0, "x0", self.dimension))
        object.__setattr__(self, "xf", _as_unit(self.xf, "xf", self.dimension))
        wps = tuple(_as_unit(w, f"waypoints[{i}]", self.dimension) for i, w in enumerate(self.waypoints))
        object.__setattr__(self, "waypoints", wps)
        for i in range(len(wps) - 1):
            if np.allclose(wps[i], wps[i + 1], rtol=0, atol=UNIT_TOL):
                raise ValueError(f"waypoints[{i}] and waypoints[{i + 1}] coincide")
        n_legs = len(wps) + 1
        legs = tuple(self.legs) or tuple(LegPolicy() for _ in range(n_legs))
        if len(legs) != n_legs:
            raise ValueError(f"expected {n_legs} leg policies, got {len(legs)}")
        object.__setattr__(self, "legs", legs)

    @property
    def points(self) -> list[np.ndarray]:
        return [self.x0, *self.waypoints, self.xf]


def _fallback_axis(x0: np.ndarray) -> np.ndarray:
    # lowest-index coordinate axis among those least aligned with x0, made orthogonal
    i = int(np.argmin(np.abs(x0)))
    e = np.zeros(3)
    e[i] = 1.0
    e -= e.dot(x0) * x0
    return e / np.linalg.norm(e)


def geodesic_vector(x0: np.ndarray, xf: np.ndarray) -> Su2Vector:
    """angle * axis of the minimal rotation carrying x0 to xf."""
    cross = np.cross(x0, xf)
    s = float(np.linalg.norm(cross))
    c = float(np.dot(x0, xf))
    if s < 1e-14:
        if c > 0:
            return ZERO
        return Su2Vector.from_array(math.pi * _fallback_axis(x0))
    n = cross / s
    # keep the axis exactly orthogonal to x0; errors along x0 are amplified near pi
    n -= n.dot(x0) * x0
    n /= np.linalg.norm(n)
    return Su2Vector.from_array(math.atan2(s, c) * n)


def so3_target(x0, xf, explicit: Su2Vector | None = None) -> tuple[Su2Vector, np.ndarray]:
    """su(2) vector v and rotation S = rodrigues(v) with S x0 = xf."""
    x0 = _as_unit(x0, "x0", 3)
    xf = _as_unit(xf, "xf", 3)
    v = geodesic_vector(x0, xf) if explicit is None else explicit
    S = rodrigues(v)
    err = float(np.linalg.norm(S @ x0 - xf))
    if err > MAP_TOL:
        raise ValueError(f"target {v} maps x0 to within {err:.3g} of xf, not {MAP_TOL:g}")
    return v, S


def su2_preimages(S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The two SU(2) matrices T, -T whose rotation is S."""
    x, y, z, w = Rotation.from_matrix(np.asarray(S, dtype=float)).as_quat()
    T = np.array([[w - 1j * z, -y - 1j * x], [y - 1j * x, w + 1j * z]], dtype=complex)
    return T, -T


# --- fourth order ----------------------------------------------------------

E1 = np.array([1.0, 0.0, 0.0, 0.0])
_SUPPORTED = {
    (0, 0, 1, 0): "cc1",
    (0, 0, 0, 1): "cc2",
    (0, 1, 0, 0): "free",
}


@dataclass(frozen=True)
class FourthOrderTarget:
    p: CayleyKlein
    q: CayleyKlein
    mode: str
    k: int | None = None

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return ck_to_matrix(self.p), ck_to_matrix(self.q)

    def rotation(self) -> np.ndarray:
        return phi_tilde(*self.matrices())


def classify_fourth_target(y) -> str:
    y = np.asarray(y, dtype=float)
    for key, mode in _SUPPORTED.items():
        if np.allclose(y, key, rtol=0, atol=UNIT_TOL):
            return mode
    raise InfeasibleError(
        "unsupported-target",
        f"no closed-form construction for y = {y.tolist()}; supported: "
        + ", ".join(str(k) for k in _SUPPORTED),
    )


def fourth_order_targets(y, sys: FourthOrderSystem, mode: str | None = None, x0=E1) -> FourthOrderTarget:
    """Pair (p, q) of SU(2) targets whose SO(4) image carries e1 to y."""
    if not np.allclose(np.asarray(x0, dtype=float), E1, rtol=0, atol=UNIT_TOL):
        raise InfeasibleError("unsupported-target", "fourth-order transfers must start at (1, 0, 0, 0)")
    y = _as_unit(y, "y", 4)
    detected = classify_fourth_target(y)
    if mode is not None and mode != detected:
        raise InfeasibleError(mode, f"mode {mode!r} does not construct y = {y.tolist()} (needs {detected!r})")
    mode = detected

    if mode == "free":
        nu, beta = sys.circuit.nu, sys.circuit.beta
        L = math.pi * (nu + beta) / (4 * nu)
        target = FourthOrderTarget(CayleyKlein(0.0, L, 0.0), CayleyKlein(0.0, L - math.pi / 2, 0.0), mode)
    else:
        res = check_resonance(sys.circuit, mode)
        if res.k is None:
            raise InfeasibleError(mode, f"resonance condition {mode} not satisfied ({res.note})")
        k = res.k
        den = 4 * k * (k + 1)
        if mode == "cc1":
            p = CayleyKlein(math.pi / 4, (2 * k + 1) ** 2 * math.pi / den, -(2 * k + 1) * math.pi / den)
            # q = y^-1 p with y <-> i sy
            Q = exp_pauli(-math.pi / 2, "y") @ ck_to_matrix(p)
            q = cayley_klein_of(Q)
        else:
            p = CayleyKlein(
                math.pi / 4,
                (2 * k + 1) * (5 * k + 2) * math.pi / den,
                (2 * k + 1) * (k - 2) * math.pi / den,
            )
            q = CayleyKlein(p.alpha - math.pi / 2, math.pi / 2 - p.mu, 5 * math.pi / 2 - p.zeta)
        target = FourthOrderTarget(p, q, mode, k)

    err = float(np.linalg.norm(target.rotation() @ E1 - y))
    if err > MAP_TOL:
        raise RuntimeError(f"{mode} construction misses y by {err:.3g}")
    return target
