import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import SX, SY, SZ, su2_generator
from switchctl.lie import psi, psi_tilde
from switchctl.network import (
    FourthOrderCircuit,
    ThirdOrderCircuit,
    build_fourth,
    build_third,
    check_resonance,
    resonance_k,
    resonant_circuit,
)

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)


def test_third_example_circuit():
    sys = build_third(ThirdOrderCircuit(0.1, 0.2, 0.5))
    assert sys.omega1 == pytest.approx(2 * math.sqrt(5), rel=1e-15)
    assert sys.omega2 == pytest.approx(math.sqrt(10), rel=1e-15)
    # A = -sqrt5 i sy, B = (i/2)(2 sqrt5 sy + sqrt10 sx)
    np.testing.assert_allclose(sys.A.matrix(), -math.sqrt(5) * 1j * SY, atol=1e-15)
    np.testing.assert_allclose(
        sys.B.matrix(), 0.5j * (2 * math.sqrt(5) * SY + math.sqrt(10) * SX), atol=1e-15
    )


def test_third_symmetric_circuit():
    sys = build_third(ThirdOrderCircuit(1.0, 1.0, 1.0))
    assert sys.omega1 == 1.0 and sys.omega2 == 1.0


def test_third_matrix_layout():
    w1, w2 = 2.0, 3.0
    sys = build_third(ThirdOrderCircuit(1 / (w1**2), 1 / (w2**2), 1.0))
    for u in (0.0, 1.0, 0.3):
        want = np.array([[0, 0, w1 * (1 - u)], [0, 0, w2 * u], [-w1 * (1 - u), -w2 * u, 0]])
        np.testing.assert_allclose(sys.generator(u), want, atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(positive, positive, positive)
def test_third_psi_consistency(C1, C2, L3):
    sys = build_third(ThirdOrderCircuit(C1, C2, L3))
    assert np.max(np.abs(psi(sys.A) - sys.Atil)) < 1e-14 * max(1, sys.omega1)
    assert np.max(np.abs(psi(sys.B) - sys.Btil)) < 1e-14 * max(1, sys.omega1, sys.omega2)


@pytest.mark.parametrize("bad", [(0, 1, 1), (1, -1, 1), (1, 1, math.inf), (1, 1, math.nan)])
def test_third_rejects_nonpositive(bad):
    with pytest.raises(ValueError, match="must be a finite positive"):
        ThirdOrderCircuit(*bad)


def test_fourth_example_constants():
    circ = FourthOrderCircuit(L1=4.0, C2=1.0, L3=1.0, C4=1.0)
    assert (circ.nu, circ.beta, circ.gamma, circ.delta) == (0.5, 1.0, 0.5, 1.0)
    sys = build_fourth(circ)
    np.testing.assert_allclose(sys.A1.matrix(), 0.75j * SZ, atol=1e-15)
    np.testing.assert_allclose(sys.B1.matrix(), -0.75j * SX, atol=1e-15)
    np.testing.assert_allclose(sys.A2.matrix(), 0.25j * SZ, atol=1e-15)
    np.testing.assert_allclose(sys.B2.matrix(), -0.25j * SX, atol=1e-15)


def test_fourth_matrix_layout():
    c = FourthOrderCircuit(2.0, 0.5, 3.0, 0.7)
    nu, beta, gamma, delta = c.nu, c.beta, c.gamma, c.delta
    A = np.array([[0, -nu, 0, 0], [nu, 0, 0, 0], [0, 0, 0, -beta], [0, 0, beta, 0]])
    B = np.array([[0, 0, 0, gamma], [0, 0, delta, 0], [0, -delta, 0, 0], [-gamma, 0, 0, 0]])
    sys = build_fourth(c)
    np.testing.assert_array_equal(sys.Atil, A)
    np.testing.assert_array_equal(sys.Btil, B)
    np.testing.assert_allclose(sys.generator(1.0), A + B)


@settings(max_examples=100, deadline=None)
@given(positive, positive, positive, positive)
def test_fourth_psi_tilde_consistency(L1, C2, L3, C4):
    c = FourthOrderCircuit(L1, C2, L3, C4)
    assert c.nu * c.beta == pytest.approx(c.gamma * c.delta, rel=1e-12)
    sys = build_fourth(c)
    scale = max(1, c.nu, c.beta, c.gamma, c.delta)
    assert np.max(np.abs(psi_tilde(sys.A1, sys.A2) - sys.Atil)) < 1e-14 * scale
    assert np.max(np.abs(psi_tilde(sys.B1, sys.B2) - sys.Btil)) < 1e-14 * scale


def test_fourth_su2_generators_match_companion_equations():
    c = FourthOrderCircuit(2.0, 0.5, 3.0, 0.7)
    nu, beta, gamma, delta = c.nu, c.beta, c.gamma, c.delta
    sys = build_fourth(c)
    np.testing.assert_allclose(sys.A1.matrix(), 1j * (nu + beta) / 2 * SZ, atol=1e-15)
    np.testing.assert_allclose(sys.B1.matrix(), -1j * (gamma + delta) / 2 * SX, atol=1e-15)
    np.testing.assert_allclose(sys.A2.matrix(), 1j * (beta - nu) / 2 * SZ, atol=1e-15)
    np.testing.assert_allclose(sys.B2.matrix(), 1j * (gamma - delta) / 2 * SX, atol=1e-15)


def test_fourth_degenerate_drift():
    sys = build_fourth(FourthOrderCircuit(1.0, 2.0, 2.0, 1.0))
    assert sys.A2.lam == 0.0
    res = check_resonance(sys.circuit, "cc1")
    assert res.k is None and "degenerate" in res.note


def test_resonance_cc1_example():
    c = FourthOrderCircuit(4.0, 1.0, 1.0, 1.0)
    assert resonance_k(c, "cc1") == 1
    assert resonance_k(c, "cc2") is None


def test_resonance_k_zero_rejected():
    # (nu+beta)/(beta-nu) = 1.1/0.9 rounds to k = 0
    c = FourthOrderCircuit(L1=100.0, C2=1.0, L3=1.0, C4=1.0)
    assert resonance_k(c, "cc1") is None


def test_resonance_bad_mode():
    with pytest.raises(ValueError):
        check_resonance(FourthOrderCircuit(4, 1, 1, 1), "cc3")


@pytest.mark.parametrize("k", [1, 2, 3, 7])
@pytest.mark.parametrize("mode", ["cc1", "cc2"])
def test_resonant_circuits(k, mode):
    c = resonant_circuit(k, mode, L3=0.8, C4=1.7)
    assert resonance_k(c, mode) == k
    other = "cc2" if mode == "cc1" else "cc1"
    assert resonance_k(c, other) is None
    if mode == "cc1":
        assert abs(c.C2 - c.C4) / c.C2 < 1e-9
        assert abs(math.sqrt(c.L1 / c.L3) - (k + 1) / k) < 1e-9


def test_resonant_circuit_rejects_k0():
    with pytest.raises(ValueError):
        resonant_circuit(0, "cc1")


def test_generator_formula_matches_oracle():
    sys = build_third(ThirdOrderCircuit(0.1, 0.2, 0.5))
    w1, w2 = sys.omega1, sys.omega2
    np.testing.assert_allclose(sys.A.matrix(), su2_generator(0, w1, 0))
    np.testing.assert_allclose(sys.B.matrix(), su2_generator(-w2, -w1, 0))
