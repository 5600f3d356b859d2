"""Factor SU(2) targets into exponentials the switched networks can realize.

Factor lists are written in matrix-product order: the product
F[0] @ F[1] @ ... @ F[-1] equals the target, so the LAST factor acts first
in time. The scheduler reverses each list when emitting pulses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .lie import CayleyKlein, Su2Vector, ck_to_matrix, cayley_klein_of, exp_pauli, exp_su2, log_su2
from .network import FourthOrderSystem, ThirdOrderSystem
from .targets import FourthOrderTarget

TWO_PI = 2 * math.pi
RECON_TOL = 1e-10
ANGLE_EPS = 1e-12

KINDS = ("z", "x", "y", "v", "mixed")


@dataclass(frozen=True)
class Factor:
    """One exponential factor.

    kind "x"/"y"/"z": exp(i angle sigma_kind).
    kind "v": V(gamma) = exp[(-Im gamma) i sy + (Re gamma) i sx].
    kind "mixed": exp(drift * A + control * B) for a given generator pair.
    """

    kind: str
    angle: float = 0.0
    gamma: complex = 0j
    drift: float = 0.0
    control: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if not (math.isfinite(self.angle) and math.isfinite(self.gamma.real) and math.isfinite(self.gamma.imag)):
            raise ValueError(f"non-finite factor {self!r}")

    def matrix(self, generators: tuple[Su2Vector, Su2Vector] | None = None) -> np.ndarray:
        if self.kind in ("x", "y", "z"):
            return exp_pauli(self.angle, self.kind)
        if self.kind == "v":
            return v_matrix(self.gamma)
        if generators is None:
            raise ValueError("mixed factors need the (drift, control) generators")
        A, B = generators
        return exp_su2(A * self.drift + B * self.control)


def z_rotation(angle: float) -> Factor:
    return Factor("z", angle=angle)


def x_rotation(angle: float) -> Factor:
    return Factor("x", angle=angle)


def y_rotation(angle: float) -> Factor:
    return Factor("y", angle=angle)


def v_factor(gamma: complex) -> Factor:
    return Factor("v", gamma=complex(gamma))


def mixed(drift: float, control: float) -> Factor:
    return Factor("mixed", drift=drift, control=control)


def v_matrix(gamma: complex) -> np.ndarray:
    # i(Re g sx - Im g sy) == -(i/2)(-2 Re g sx + 2 Im g sy)
    return exp_su2(Su2Vector(-2 * gamma.real, 2 * gamma.imag, 0.0))


def reconstruct(factors, generators=None) -> np.ndarray:
    out = np.eye(2, dtype=complex)
    for f in factors:
        out = out @ f.matrix(generators)
    return out


def _reduce_angle(L: float) -> float:
    """L mod 2 pi in [0, 2 pi), snapping values within ANGLE_EPS of 2 pi to 0."""
    r = math.fmod(L, TWO_PI)
    if r < 0:
        r += TWO_PI
    if r < ANGLE_EPS or TWO_PI - r < ANGLE_EPS:
        return 0.0
    return r


# --- split exp(i p sz) V(gamma) exp(i (zeta - p) sz) ------------------------


def zvz_split(ck: CayleyKlein) -> list[Factor]:
    """Split S(alpha, zeta, mu) with the middle factor a free-evolution V(i alpha)."""
    p = (ck.zeta + ck.mu - math.pi) / 2
    return [z_rotation(p), v_factor(complex(0.0, ck.alpha)), z_rotation(ck.zeta - p)]


# --- exp(i L sz) = V(g1) V(g2) ----------------------------------------------


def admissible_arc(sys: ThirdOrderSystem) -> tuple[float, float]:
    """Open interval of phases theta with a > 0 for gamma = r e^{i theta}."""
    d = math.atan(sys.omega1 / sys.omega2)
    return -d, math.pi - d


def is_admissible_phase(theta: float, sys: ThirdOrderSystem) -> bool:
    d = math.atan(sys.omega1 / sys.omega2)
    return math.sin(theta + d) > 1e-12


def two_v_decomposition(
    L: float, sys: ThirdOrderSystem, theta1: float | None = None
) -> tuple[complex, complex]:
    """(g1, g2) with V(g1) V(g2) = exp(i L sz), |g_k| = pi/2, both in the a > 0 half-plane.

    Without `theta1` the phase pair is centred on the middle of the admissible
    arc. With `theta1` the second phase follows from theta1 - theta2 = L - pi.
    """
    Lr = _reduce_angle(L)
    if Lr == 0.0:
        raise ValueError("L must not be a multiple of 2 pi")
    diff = Lr - math.pi
    if theta1 is None:
        lo, hi = admissible_arc(sys)
        centre = 0.5 * (lo + hi)
        theta1 = centre + diff / 2
    theta2 = theta1 - diff
    for name, th in (("theta1", theta1), ("theta2", theta2)):
        if not is_admissible_phase(th, sys):
            lo, hi = admissible_arc(sys)
            raise InfeasibleError(
                "half-plane",
                f"{name} = {th:.6g} lies outside the admissible arc ({lo:.6g}, {hi:.6g}) mod 2 pi",
            )
    r = math.pi / 2
    return r * complex(math.cos(theta1), math.sin(theta1)), r * complex(math.cos(theta2), math.sin(theta2))


# --- exp(i L sz) = exp(-i 7pi/4 sy) exp(i L sx) exp(-i pi/4 sy) -------------


def bangbang_z(L: float) -> list[Factor]:
    return [y_rotation(-7 * math.pi / 4), x_rotation(L), y_rotation(-math.pi / 4)]


# --- T = exp(i D sx) exp(i E sy) exp(i F sx) --------------------------------


def euler_product(D: float, E: float, F: float) -> np.ndarray:
    return exp_pauli(D, "x") @ exp_pauli(E, "y") @ exp_pauli(F, "x")


def euler_branch_sign(D: float, E: float, F: float, U: np.ndarray, tol: float = RECON_TOL) -> int | None:
    """+1 if (D, E, F) rebuilds U, -1 if it rebuilds -U, else None."""
    R = euler_product(D, E, F)
    if np.max(np.abs(R - U)) < tol:
        return 1
    if np.max(np.abs(R + U)) < tol:
        return -1
    return None


def euler_xyx(ck: CayleyKlein) -> tuple[float, float, float]:
    """Euler angles (D, E, F) of S(alpha, zeta, mu) for the generators i sx, i sy.

    From the entries of the product,

        cos a cos z = cos E cos(D+F)     sin a sin m = cos E sin(D+F)
        cos a sin z = -sin E sin(D-F)    sin a cos m = sin E cos(D-F)

    so |cos E| and |sin E| follow from the moduli and D+F, D-F from
    two-argument arctangents. The E sign branches are tried in order and the
    first one that rebuilds the target is returned.
    """
    U = ck_to_matrix(ck)
    re11, im11 = U[0, 0].real, U[0, 0].imag
    re12, im12 = U[0, 1].real, U[0, 1].imag
    e = math.atan2(math.hypot(im11, re12), math.hypot(re11, im12))
    for sign in (1.0, -1.0):
        E = sign * e
        dsum = math.atan2(im12, re11)
        ddiff = math.atan2(-sign * im11, sign * re12)
        D, F = (dsum + ddiff) / 2, (dsum - ddiff) / 2
        if euler_branch_sign(D, E, F, U) == 1:
            return D, E, F
    raise RuntimeError(f"no Euler branch rebuilds {ck}")  # pragma: no cover


# --- fourth order -----------------------------------------------------------


def _fourth_coefficients(target: FourthOrderTarget, sys: FourthOrderSystem):
    c = sys.circuit
    nu, beta, gamma, delta = c.nu, c.beta, c.gamma, c.delta
    pi, r2 = math.pi, math.sqrt(2.0)
    if target.mode == "free":
        t = pi / (2 * nu)
        return [mixed(t, 0.0)], [mixed(t, 0.0)]
    k = target.k
    s = 2 * k + 1
    if target.mode == "cc1":
        p = [
            mixed(s * pi / (2 * (k + 1) * (nu + beta)), 0.0),
            mixed(s * pi / (r2 * (nu + beta)), s * pi / (r2 * (delta + gamma))),
            mixed(s * (6 * k + 1) * pi / (2 * k * (nu + beta)), 0.0),
        ]
        q = [
            mixed(pi / (2 * (k + 1) * (beta - nu)), 0.0),
            mixed(pi / (r2 * (beta - nu)), pi / (r2 * (delta - gamma))),
            mixed((6 * k + 1) * pi / (2 * k * (beta - nu)), 0.0),
        ]
    elif target.mode == "cc2":
        p = [
            mixed(s * 3 * pi / (2 * (k + 1) * (nu + beta)), 0.0),
            mixed(s * pi / (r2 * (nu + beta)), s * pi / (r2 * (delta + gamma))),
            mixed(s * (10 * k + 2) * pi / (2 * k * (nu + beta)), 0.0),
        ]
        q = [
            mixed(3 * pi / (2 * (k + 1) * (beta - nu)), 0.0),
            mixed(pi / (r2 * (beta - nu)), pi / (r2 * (gamma - delta))),
            mixed((10 * k + 2) * pi / (2 * k * (beta - nu)), 0.0),
        ]
    else:
        raise ValueError(f"unknown fourth-order mode {target.mode!r}")
    return p, q


def coefficient_mismatch(plist: list[Factor], qlist: list[Factor]) -> float:
    if len(plist) != len(qlist):
        return math.inf
    return max(
        (max(abs(f.drift - g.drift), abs(f.control - g.control)) for f, g in zip(plist, qlist)),
        default=0.0,
    )


def fourth_reconstruction_error(
    target: FourthOrderTarget, sys: FourthOrderSystem, plist: list[Factor], qlist: list[Factor]
) -> tuple[float, int]:
    """Smallest max-entry error of (P, Q) against +-(p, q) and the sign achieving it.

    (p, q) and (-p, -q) have the same SO(4) image, so either sign is a valid
    preparation of the target.
    """
    P = reconstruct(plist, (sys.A1, sys.B1))
    Q = reconstruct(qlist, (sys.A2, sys.B2))
    p, q = target.matrices()
    errs = {
        s: max(np.max(np.abs(P - s * p)), np.max(np.abs(Q - s * q))) for s in (1, -1)
    }
    sign = min(errs, key=errs.get)
    return float(errs[sign]), sign


def fourth_order_factorize(
    target: FourthOrderTarget, sys: FourthOrderSystem, tol: float = RECON_TOL
) -> tuple[list[Factor], list[Factor]]:
    """Factor lists for p (system 1) and q (system 2) sharing one control."""
    plist, qlist = _fourth_coefficients(target, sys)
    mismatch = coefficient_mismatch(plist, qlist)
    if mismatch > tol:
        raise InfeasibleError(
            target.mode or "resonance",
            f"p- and q-factor coefficients differ by {mismatch:.3g}; resonance condition violated",
        )
    err, _ = fourth_reconstruction_error(target, sys, plist, qlist)
    if err > tol:
        raise RuntimeError(f"{target.mode} factor lists miss their targets by {err:.3g}")
    return plist, qlist


# --- whole-target pipelines for the third-order network ---------------------

ALGORITHMS = ("piecewise", "bangbang1", "bangbang2")


def single_pulse_factor(T: np.ndarray, sys: ThirdOrderSystem, bangbang: bool) -> list[Factor] | None:
    """A one-factor realization of T when T is a single admissible pulse.

    Returns [] for the identity, a one-element list when T = exp(a A + b B)
    for some a > 0 (with b in {0, a} when `bangbang`), else None.
    """
    v = log_su2(T)
    if v.lam == 0.0:
        return []
    if abs(v.c) > ANGLE_EPS:
        return None
    if bangbang:
        if abs(v.b) <= ANGLE_EPS:
            return [x_rotation(-v.a / 2)]
        if abs(v.a) <= ANGLE_EPS:
            return [y_rotation(-v.b / 2)]
        return None
    # same rotation axis, rotation angle shifted by a full turn in SU(2)
    for w in (v, v * (1.0 - TWO_PI / v.lam)):
        b = -w.a / sys.omega2
        a = b + w.b / sys.omega1
        if a > ANGLE_EPS:
            return [v_factor(complex(-w.a / 2, w.b / 2))]
    return None


def third_order_factors(
    T: np.ndarray,
    sys: ThirdOrderSystem,
    algorithm: str,
    theta1=None,
    euler: tuple[float, float, float] | None = None,
    shortcut: bool = True,
) -> list[Factor]:
    """Written-order factor list for T under one of the three algorithms.

    piecewise: z V z split, each z factor as two V factors.
    bangbang1: z V z split, each z factor as y x y.
    bangbang2: x y x Euler factorization.
    `shortcut` first checks whether T is already a single realizable pulse.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    bangbang = algorithm != "piecewise"
    if shortcut:
        single = single_pulse_factor(T, sys, bangbang)
        if single is not None:
            return single

    if algorithm == "bangbang2":
        D, E, F = euler if euler is not None else euler_xyx(cayley_klein_of(T))
        return [x_rotation(D), y_rotation(E), x_rotation(F)]

    ck = cayley_klein_of(T)
    left, middle, right = zvz_split(ck)
    parts = [left, middle, right] if ck.alpha != 0.0 else [z_rotation(ck.zeta)]

    if theta1 is None:
        thetas = iter(())
    elif isinstance(theta1, (int, float)):
        thetas = iter((float(theta1),) * 2)
    else:
        thetas = iter(theta1)

    out: list[Factor] = []
    for f in parts:
        if f.kind == "z":
            if _reduce_angle(f.angle) == 0.0:
                continue
            if algorithm == "piecewise":
                g1, g2 = two_v_decomposition(f.angle, sys, next(thetas, None))
                out += [v_factor(g1), v_factor(g2)]
            else:
                out += bangbang_z(f.angle)
        elif algorithm == "bangbang1":
            out.append(y_rotation(-f.gamma.imag))
        else:
            out.append(f)
    return out
