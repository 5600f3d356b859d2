import math

import numpy as np
import pytest

from switchctl.errors import InfeasibleError
from switchctl.lie import Su2Vector
from switchctl.network import FourthOrderCircuit, ThirdOrderCircuit, build_fourth, build_third
from switchctl.pipeline import compare_pulse_costs, leg_targets, synthesis_report, synthesize
from switchctl.simulate import verify_transfer
from switchctl.targets import LegPolicy, TransferRequest

PI = math.pi
SYS3 = build_third(ThirdOrderCircuit(0.1, 0.2, 0.5))
SYS4 = build_fourth(FourthOrderCircuit(4.0, 1.0, 1.0, 1.0))


def random_unit(rng, n):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize("algorithm", ["piecewise", "bangbang1", "bangbang2"])
def test_random_geodesic_transfers(algorithm):
    rng = np.random.default_rng(60)
    for _ in range(40):
        pts = [random_unit(rng, 3) for _ in range(4)]
        req = TransferRequest(3, pts[0], pts[-1], tuple(pts[1:-1]))
        sched = synthesize(req, SYS3, algorithm)
        report = verify_transfer(req, SYS3, sched)
        assert report.passed, report
        assert all(p.duration > 0 for p in sched.pulses)
        assert sched.is_bangbang or algorithm == "piecewise"


def test_random_circuits_piecewise():
    rng = np.random.default_rng(61)
    for _ in range(30):
        sys = build_third(ThirdOrderCircuit(*rng.uniform(0.05, 3.0, size=3)))
        x0, xf = random_unit(rng, 3), random_unit(rng, 3)
        req = TransferRequest(3, x0, xf)
        for alg in ("piecewise", "bangbang1", "bangbang2"):
            assert verify_transfer(req, sys, synthesize(req, sys, alg)).passed


def test_leg_targets_match_rotations():
    from switchctl.lie import phi

    req = TransferRequest(3, [1, 0, 0], [0, 0, 1], legs=(LegPolicy(),))
    (T,) = leg_targets(req)
    np.testing.assert_allclose(phi(T) @ [1, 0, 0], [0, 0, 1], atol=1e-12)


def test_bad_euler_override_rejected():
    r2 = 1 / math.sqrt(2)
    legs = (LegPolicy("explicit", Su2Vector(0, 0, -PI / 2), euler=(0.1, 0.2, 0.3)),)
    req = TransferRequest(3, [r2, 0, -r2], [0, -r2, -r2], legs=legs)
    with pytest.raises(ValueError, match="euler"):
        synthesize(req, SYS3, "bangbang2")


def test_algorithm_dimension_checks():
    req3 = TransferRequest(3, [1, 0, 0], [0, 1, 0])
    req4 = TransferRequest(4, [1, 0, 0, 0], [0, 0, 1, 0])
    with pytest.raises(ValueError):
        synthesize(req3, SYS3, "fourth")
    with pytest.raises(ValueError):
        synthesize(req4, SYS4, "piecewise")


def test_fourth_waypoints_unsupported():
    req = TransferRequest(4, [1, 0, 0, 0], [0, 0, 1, 0], ([0, 1, 0, 0],))
    with pytest.raises(InfeasibleError):
        synthesize(req, SYS4, "fourth")


def test_synthesis_report_fields():
    req = TransferRequest(3, [1, 0, 0], [0, 1, 0])
    sched = synthesize(req, SYS3, "bangbang1")
    rep = synthesis_report(sched)
    assert rep["total_duration"] == pytest.approx(sum(p["duration"] for p in rep["pulses"]))
    assert rep["cumulative_power"] == pytest.approx(sum(abs(p["power"]) for p in rep["pulses"]))
    assert rep["bangbang"] is True
    assert rep["pulse_cost"]["sum_sqrt_a2_b2"] == pytest.approx(sum(rep["pulse_cost"]["per_pulse"]))


def test_pulse_cost_diagnostic():
    out = compare_pulse_costs(SYS3, n=20, seed=3)
    assert out["n_targets"] == 20 and len(out["targets"]) == 20
    assert 0.0 <= out["fraction_piecewise_lower"] <= 1.0
    assert out["piecewise_mean"] > 0 and out["euler_mean"] > 0
