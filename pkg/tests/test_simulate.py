import math

import numpy as np
import pytest

from oracle import random_skew, series_expm
from switchctl.network import FourthOrderCircuit, ThirdOrderCircuit, build_fourth, build_third
from switchctl.pipeline import synthesize
from switchctl.lie import Su2Vector
from switchctl.schedule import Pulse, Schedule
from switchctl.simulate import (
    propagate_pulse,
    pulse_propagator,
    pulse_states,
    run_schedule,
    segment_propagator,
    verify_transfer,
)
from switchctl.targets import LegPolicy, TransferRequest

PI = math.pi
R2 = 1 / math.sqrt(2)
SYS3 = build_third(ThirdOrderCircuit(0.1, 0.2, 0.5))
SYS4 = build_fourth(FourthOrderCircuit(4.0, 1.0, 1.0, 1.0))
X0 = [1.0, 0.0, 0.0]
W1, W2, XF = [R2, 0.0, -R2], [0.0, -R2, -R2], [0.0, -1.0, 0.0]


def demo_request(**leg2):
    legs = (LegPolicy(), LegPolicy("explicit", Su2Vector(0, 0, -PI / 2), **leg2), LegPolicy())
    return TransferRequest(3, X0, XF, (W1, W2), legs)


def test_first_leg_free_pulse():
    x = propagate_pulse(np.array(X0), SYS3, Pulse(PI / (8 * math.sqrt(5)), 0.0))
    np.testing.assert_allclose(x, W1, atol=1e-15)


def test_tiny_pulse_is_near_identity():
    x = propagate_pulse(np.array(X0), SYS3, Pulse(1e-300, 0.3))
    np.testing.assert_array_equal(x, X0)


def test_propagator_vs_series_third():
    rng = np.random.default_rng(50)
    worst = 0.0
    for _ in range(1000):
        sys = build_third(ThirdOrderCircuit(*rng.uniform(0.05, 2.0, size=3)))
        u, t = rng.uniform(-1.5, 2.5), rng.uniform(0.0, 5.0)
        R = segment_propagator(sys, u, t)
        worst = max(worst, np.max(np.abs(R - series_expm(sys.generator(u) * t))))
    assert worst < 1e-10


def test_propagator_vs_series_fourth():
    rng = np.random.default_rng(51)
    worst = 0.0
    for _ in range(1000):
        sys = build_fourth(FourthOrderCircuit(*rng.uniform(0.1, 4.0, size=4)))
        u, t = rng.uniform(-1.5, 2.5), rng.uniform(0.0, 5.0)
        R = segment_propagator(sys, u, t)
        worst = max(worst, np.max(np.abs(R - series_expm(sys.generator(u) * t))))
    assert worst < 1e-10


def test_propagators_are_rotations():
    rng = np.random.default_rng(52)
    for sys in (SYS3, SYS4):
        for _ in range(100):
            R = pulse_propagator(sys, Pulse(rng.uniform(0.01, 10), rng.uniform(-2, 3)))
            n = R.shape[0]
            assert np.max(np.abs(R.T @ R - np.eye(n))) < 1e-12
            assert abs(np.linalg.det(R) - 1) < 1e-12


def test_empty_schedule():
    x, rows = run_schedule(X0, SYS3, Schedule(3, []))
    np.testing.assert_array_equal(x, X0)
    assert rows.shape == (1, 4)


@pytest.mark.parametrize("algorithm,kw", [
    ("piecewise", {"theta1": (-PI / 8,)}),
    ("bangbang1", {}),
    ("bangbang2", {"euler": (3 * PI / 4, -7 * PI / 4, PI / 4)}),
])
def test_three_leg_transfer(algorithm, kw):
    req = demo_request(**kw)
    sched = synthesize(req, SYS3, algorithm)
    report = verify_transfer(req, SYS3, sched)
    assert report.passed
    assert report.endpoint_error < 1e-9
    assert len(report.waypoint_errors) == 2 and max(report.waypoint_errors) < 1e-9
    assert report.max_norm_drift < 1e-9
    assert report.bangbang_valid == (algorithm != "piecewise")
    x, _ = run_schedule(req.x0, SYS3, sched)
    np.testing.assert_allclose(x, XF, atol=1e-9)


def test_fourth_cc1_transfer():
    req = TransferRequest(4, [1, 0, 0, 0], [0, 0, 1, 0])
    sched = synthesize(req, SYS4, "fourth")
    x, _ = run_schedule(req.x0, SYS4, sched)
    np.testing.assert_allclose(x, [0, 0, 1, 0], atol=1e-9)
    # against the series oracle, pulse by pulse
    y = np.array([1.0, 0, 0, 0])
    for p in sched.pulses:
        y = series_expm(SYS4.generator(p.control) * p.duration) @ y
    np.testing.assert_allclose(y, [0, 0, 1, 0], atol=1e-9)


def test_norm_conservation_per_pulse():
    rng = np.random.default_rng(53)
    for sys, n in ((SYS3, 3), (SYS4, 4)):
        pulses = [Pulse(rng.uniform(0.01, 3), rng.uniform(-1, 2)) for _ in range(200)]
        x0 = rng.normal(size=n)
        x0 /= np.linalg.norm(x0)
        states = pulse_states(x0, sys, Schedule(n, pulses))
        for s in states:
            assert abs(np.linalg.norm(s) - 1.0) < 1e-12


def test_group_to_state_consistency():
    rng = np.random.default_rng(54)
    for sys, n in ((SYS3, 3), (SYS4, 4)):
        sched = Schedule(n, [Pulse(rng.uniform(0.01, 3), rng.uniform(-1, 2)) for _ in range(20)])
        x0 = np.eye(n)[0]
        R = np.eye(n)
        for p in sched.pulses:
            R = pulse_propagator(sys, p) @ R
        x, _ = run_schedule(x0, sys, sched)
        assert np.max(np.abs(x - R @ x0)) < 1e-12


def test_sampling_is_exact_and_does_not_perturb():
    sched = Schedule(3, [Pulse(0.7, 0.0), Pulse(0.45, 1.0), Pulse(0.3, 0.25)])
    x_coarse, rows_coarse = run_schedule(X0, SYS3, sched)
    x_fine, rows = run_schedule(X0, SYS3, sched, sample_dt=0.01)
    assert np.array_equal(x_coarse, x_fine)
    assert len(rows_coarse) >= 1000
    assert np.all(np.diff(rows[:, 0]) > 0)
    assert rows[-1, 0] == pytest.approx(sched.total_duration)
    # sample inside the second pulse, checked against the series exponential
    t0 = 0.7
    x_start = series_expm(SYS3.generator(0.0) * 0.7) @ np.array(X0)
    for row in rows:
        if t0 < row[0] < t0 + 0.45:
            want = series_expm(SYS3.generator(1.0) * (row[0] - t0)) @ x_start
            np.testing.assert_allclose(row[1:], want, atol=1e-12)
    with pytest.raises(ValueError):
        run_schedule(X0, SYS3, sched, sample_dt=0.0)


def test_verify_piecewise_flags_negative_control():
    req = demo_request(theta1=(-PI / 8,))
    sched = synthesize(req, SYS3, "piecewise")
    report = verify_transfer(req, SYS3, sched)
    assert report.passed and not report.bangbang_valid
    assert any(p.control < 0 for p in sched.pulses)


def test_verify_detects_tampering():
    req = demo_request()
    sched = synthesize(req, SYS3, "bangbang1")
    p = sched.pulses[2]
    sched.pulses[2] = Pulse(p.duration * 1.001, p.control)
    report = verify_transfer(req, SYS3, sched)
    assert not report.passed
    assert report.endpoint_error > 1e-9


def test_verify_mode_violation():
    req = demo_request()
    sched = synthesize(req, SYS3, "bangbang1")
    sched.pulses[0] = Pulse(sched.pulses[0].duration, 0.5)
    report = verify_transfer(req, SYS3, sched, tol=10.0)
    assert "mode-violation" in report.notes and not report.passed


def test_verify_dimension_mismatch():
    req = TransferRequest(4, [1, 0, 0, 0], [0, 0, 1, 0])
    with pytest.raises(ValueError, match="dimension"):
        verify_transfer(req, SYS3, Schedule(3, []))


def test_verify_without_leg_boundaries():
    req = demo_request()
    sched = synthesize(req, SYS3, "bangbang1")
    sched.leg_ends = None
    report = verify_transfer(req, SYS3, sched)
    assert report.waypoint_errors == [] and report.notes
    assert report.to_dict()["passed"] is True


def test_report_errors_nonnegative():
    rng = np.random.default_rng(55)
    req = TransferRequest(3, X0, XF)
    for _ in range(20):
        sched = Schedule(3, [Pulse(rng.uniform(0.1, 1), rng.choice([0.0, 1.0])) for _ in range(3)], leg_ends=[3])
        r = verify_transfer(req, SYS3, sched)
        assert r.endpoint_error >= 0 and r.max_norm_drift >= 0


def test_skew_oracle_sanity():
    rng = np.random.default_rng(56)
    W = random_skew(rng, 3)
    R = series_expm(W)
    assert np.max(np.abs(R.T @ R - np.eye(3))) < 1e-13
