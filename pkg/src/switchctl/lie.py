"""Closed-form arithmetic on su(2)/SU(2), so(3)/SO(3) and so(4)/SO(4).

An element of su(2) is carried as the three real coefficients (a, b, c) of

    K = -(i/2) (a sx + b sy + c sz)

and every exponential in this module is evaluated in closed form. The SO(4)
exponential goes through the pair of SU(2) exponentials and the quaternion
double cover, so no 4x4 matrix function is ever evaluated numerically.

Quaternion convention: the unit quaternion (w, x, y, z) is identified with the
SU(2) matrix w*I + x*(i sz) + y*(i sy) + z*(i sx). In entries this is simply
U11 = w + ix, U12 = y + iz. With this identification the sandwich
v -> p v q^-1 is the SO(4) image of (p, q) and its derivative at the identity
is exactly `psi_tilde`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)

UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class Su2Vector:
    """Coefficients (a, b, c) of -(i/2)(a sx + b sy + c sz)."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise ValueError(f"Su2Vector entries must be finite, got {self!r}")

    @classmethod
    def from_array(cls, arr) -> Su2Vector:
        a, b, c = (float(v) for v in arr)
        return cls(a, b, c)

    @property
    def lam(self) -> float:
        """Half the Euclidean norm of (a, b, c)."""
        return 0.5 * math.sqrt(self.a**2 + self.b**2 + self.c**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=float)

    def matrix(self) -> np.ndarray:
        """The 2x2 anti-Hermitian matrix this vector stands for."""
        return -0.5j * (self.a * SIGMA_X + self.b * SIGMA_Y + self.c * SIGMA_Z)

    def __add__(self, other: Su2Vector) -> Su2Vector:
        return Su2Vector(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: Su2Vector) -> Su2Vector:
        return Su2Vector(self.a - other.a, self.b - other.b, self.c - other.c)

    def __mul__(self, s: float) -> Su2Vector:
        return Su2Vector(s * self.a, s * self.b, s * self.c)

    __rmul__ = __mul__

    def __neg__(self) -> Su2Vector:
        return Su2Vector(-self.a, -self.b, -self.c)


ZERO = Su2Vector(0.0, 0.0, 0.0)


def su2_from_matrix(K: np.ndarray) -> Su2Vector:
    """Read (a, b, c) back from an anti-Hermitian traceless 2x2 matrix."""
    K = np.asarray(K, dtype=complex)
    return Su2Vector(-K[0, 1].imag - K[1, 0].imag, K[1, 0].real - K[0, 1].real, -2.0 * K[0, 0].imag)


def is_su2(U: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2) or not np.all(np.isfinite(U)):
        return False
    unitary = np.max(np.abs(U.conj().T @ U - I2)) < tol
    return bool(unitary and abs(np.linalg.det(U) - 1.0) < tol)


def is_rotation(R: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    if R.shape != (n, n):
        return False
    return bool(np.max(np.abs(R.T @ R - np.eye(n))) < tol and abs(np.linalg.det(R) - 1.0) < tol)


def exp_su2(v: Su2Vector) -> np.ndarray:
    """U = cos(lam) I - i (sin(lam) / (2 lam)) (a sx + b sy + c sz)."""
    lam = v.lam
    if lam == 0.0:
        return I2.copy()
    s = math.sin(lam) / (2.0 * lam)
    cl = math.cos(lam)
    return np.array(
        [
            [cl - 1j * s * v.c, -1j * s * v.a - s * v.b],
            [-1j * s * v.a + s * v.b, cl + 1j * s * v.c],
        ],
        dtype=complex,
    )


def log_su2(U: np.ndarray) -> Su2Vector:
    """Principal logarithm, lam in [0, pi]; -I maps to (2 pi, 0, 0)."""
    U = np.asarray(U, dtype=complex)
    # U = cos(lam) I - i sin(lam) n.sigma
    nx, ny, nz = -U[0, 1].imag, -U[0, 1].real, -U[0, 0].imag
    s = math.sqrt(nx * nx + ny * ny + nz * nz)
    lam = math.atan2(s, U[0, 0].real)
    if s == 0.0:
        if U[0, 0].real < 0:
            return Su2Vector(2 * math.pi, 0.0, 0.0)
        return ZERO
    k = 2.0 * lam / s
    return Su2Vector(k * nx, k * ny, k * nz)


def psi(v: Su2Vector) -> np.ndarray:
    """so(3) image of an su(2) vector (the skew matrix of (a, b, c))."""
    a, b, c = v.a, v.b, v.c
    return np.array([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])


def psi_inv(W: np.ndarray) -> Su2Vector:
    W = np.asarray(W, dtype=float)
    return Su2Vector(W[2, 1], W[0, 2], W[1, 0])


def _quat_rotation(w: float, q: np.ndarray) -> np.ndarray:
    # rotation by 2*lam about n, where w = cos(lam), q = sin(lam) n
    qx, qy, qz = q
    return np.array(
        [
            [w * w + qx * qx - qy * qy - qz * qz, 2 * (qx * qy - w * qz), 2 * (qx * qz + w * qy)],
            [2 * (qx * qy + w * qz), w * w - qx * qx + qy * qy - qz * qz, 2 * (qy * qz - w * qx)],
            [2 * (qx * qz - w * qy), 2 * (qy * qz + w * qx), w * w - qx * qx - qy * qy + qz * qz],
        ]
    )


def phi(U: np.ndarray) -> np.ndarray:
    """SO(3) image of U under the adjoint action, U K U* in (a, b, c) coordinates.

    Quadratic in the entries of U, so phi(-U) == phi(U) bit for bit.
    """
    U = np.asarray(U, dtype=complex)
    w = U[0, 0].real
    q = np.array([-U[0, 1].imag, -U[0, 1].real, -U[0, 0].imag])
    return _quat_rotation(w, q)


def rodrigues(v: Su2Vector) -> np.ndarray:
    """exp(psi(v)) = I cos 2lam + (sin 2lam / 2lam) psi(v) + ((1 - cos 2lam) / 4lam^2) p p^T."""
    lam = v.lam
    if lam == 0.0:
        return np.eye(3)
    p = v.as_array()
    two = 2.0 * lam
    return (
        math.cos(two) * np.eye(3)
        + (math.sin(two) / two) * psi(v)
        + ((1.0 - math.cos(two)) / (two * two)) * np.outer(p, p)
    )


@dataclass(frozen=True)
class CayleyKlein:
    """Polar parametrization S(alpha, zeta, mu) of an SU(2) matrix.

    The canonical domain is alpha in [0, pi/2], zeta and mu in [0, 2 pi), but
    any real triple gives a valid SU(2) matrix and is accepted as-is.
    """

    alpha: float
    zeta: float
    mu: float

    def matrix(self) -> np.ndarray:
        return ck_to_matrix(self)


def ck_to_matrix(ck: CayleyKlein) -> np.ndarray:
    ca, sa = math.cos(ck.alpha), math.sin(ck.alpha)
    return np.array(
        [
            [np.exp(1j * ck.zeta) * ca, np.exp(1j * ck.mu) * sa],
            [np.exp(1j * (math.pi - ck.mu)) * sa, np.exp(-1j * ck.zeta) * ca],
        ],
        dtype=complex,
    )


def _angle_0_2pi(z: complex) -> float:
    ang = math.atan2(z.imag, z.real)
    if ang < 0.0:
        ang += 2 * math.pi
    # atan2 of a tiny negative imaginary part lands on 2 pi after the shift
    return 0.0 if ang >= 2 * math.pi else ang


def cayley_klein_of(U: np.ndarray) -> CayleyKlein:
    """Canonical (alpha, zeta, mu); zeta := 0 when cos(alpha) = 0, mu := 0 when sin(alpha) = 0."""
    U = np.asarray(U, dtype=complex)
    u11, u12 = complex(U[0, 0]), complex(U[0, 1])
    alpha = math.atan2(abs(u12), abs(u11))
    zeta = _angle_0_2pi(u11) if abs(u11) > 0.0 else 0.0
    mu = _angle_0_2pi(u12) if abs(u12) > 0.0 else 0.0
    return CayleyKlein(alpha, zeta, mu)


# --- quaternions and the SU(2) x SU(2) -> SO(4) cover -----------------------


def quat_of_su2(U: np.ndarray) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    return np.array([U[0, 0].real, U[0, 0].imag, U[0, 1].real, U[0, 1].imag])


def su2_of_quat(q) -> np.ndarray:
    w, x, y, z = (float(v) for v in q)
    return np.array([[w + 1j * x, y + 1j * z], [-y + 1j * z, w - 1j * x]], dtype=complex)


def quat_left(p) -> np.ndarray:
    """Matrix of v -> p v."""
    w, x, y, z = p
    return np.array([[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]], dtype=float)


def quat_right(q) -> np.ndarray:
    """Matrix of v -> v q."""
    w, x, y, z = q
    return np.array([[w, -x, -y, -z], [x, w, z, -y], [y, -z, w, x], [z, y, -x, w]], dtype=float)


def phi_tilde(U1: np.ndarray, U2: np.ndarray) -> np.ndarray:
    """SO(4) matrix of v -> p v q^-1 with p, q the quaternions of U1, U2."""
    p = quat_of_su2(U1)
    q = quat_of_su2(U2)
    q_inv = q * np.array([1.0, -1.0, -1.0, -1.0])
    return quat_left(p) @ quat_right(q_inv)


def psi_tilde(K1: Su2Vector, K2: Su2Vector) -> np.ndarray:
    """so(4) matrix built from the pair (K1, K2).

    Laid out with a = (a1, a2, a3) in the first column and b = (b1, b2, b3)
    in the lower-right skew block, where K1 = -(a3+b3, a2+b2, a1+b1) and
    K2 = -(b3-a3, b2-a2, b1-a1) in (x, y, z) coefficients.
    """
    a1, a2, a3 = (K2.c - K1.c) / 2, (K2.b - K1.b) / 2, (K2.a - K1.a) / 2
    b1, b2, b3 = -(K1.c + K2.c) / 2, -(K1.b + K2.b) / 2, -(K1.a + K2.a) / 2
    return so4_from_params((a1, a2, a3), (b1, b2, b3))


def so4_from_params(a, b) -> np.ndarray:
    a1, a2, a3 = a
    b1, b2, b3 = b
    return np.array(
        [
            [0.0, -a1, -a2, -a3],
            [a1, 0.0, -b3, b2],
            [a2, b3, 0.0, -b1],
            [a3, -b2, b1, 0.0],
        ]
    )


def so4_params(W: np.ndarray) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    W = np.asarray(W, dtype=float)
    return (W[1, 0], W[2, 0], W[3, 0]), (W[3, 2], W[1, 3], W[2, 1])


def psi_tilde_inv(W: np.ndarray) -> tuple[Su2Vector, Su2Vector]:
    (a1, a2, a3), (b1, b2, b3) = so4_params(W)
    K1 = Su2Vector(-(a3 + b3), -(a2 + b2), -(a1 + b1))
    K2 = Su2Vector(-(b3 - a3), -(b2 - a2), -(b1 - a1))
    return K1, K2


def exp_so4(W: np.ndarray) -> np.ndarray:
    """exp of an so(4) matrix through the two SU(2) exponentials."""
    K1, K2 = psi_tilde_inv(W)
    return phi_tilde(exp_su2(K1), exp_su2(K2))


def exp_pauli(theta: float, axis: str) -> np.ndarray:
    """exp(i theta sigma_axis) = cos(theta) I + i sin(theta) sigma_axis."""
    sig = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}[axis]
    return math.cos(theta) * I2 + 1j * math.sin(theta) * sig
