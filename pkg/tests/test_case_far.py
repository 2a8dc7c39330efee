import math

import numpy as np
import pytest

from froude_bound.case_far import far_case_bound, far_gap
from froude_bound.core import D_SQRT2, bernoulli_from_depth, flow_force, froude, script_S
from froude_bound.errors import DomainError


def test_default_theta():
    b = far_case_bound()
    assert b.case_id == "far" and b.theta == 0.95
    assert b.d_lower == pytest.approx(0.82062, abs=1e-4)
    assert b.fr_upper == pytest.approx(1.34521, abs=1e-4)
    assert b.d_lower <= b.d_raw and b.fr_upper >= b.fr_raw


def test_theta_one_recovers_sqrt2():
    b = far_case_bound(1.0)
    assert b.d_raw == pytest.approx(D_SQRT2, abs=1e-9)
    assert b.fr_raw == pytest.approx(math.sqrt(2), abs=1e-9)


def test_theta_0928():
    assert far_case_bound(0.928).d_raw == pytest.approx(0.8327, abs=1e-4)


def test_monotone_in_theta():
    thetas = np.linspace(0.9, 1.0, 11)
    d = [far_case_bound(t).d_raw for t in thetas]
    assert np.all(np.diff(d) <= 0)


def test_residual_before_rounding():
    for theta in (0.9, 0.95, 0.99):
        b = far_case_bound(theta)
        r = bernoulli_from_depth(b.d_raw)
        assert abs(flow_force(b.d_raw) - script_S(theta * r, r)) <= 1e-10


def test_direction():
    b = far_case_bound()
    assert far_gap(b.d_raw + 1e-3) > 0 > far_gap(b.d_raw - 1e-3)
    assert froude(b.d_raw) < 1.34521


@pytest.mark.parametrize("theta", [0.0, -0.1, 1.01])
def test_bad_theta(theta):
    with pytest.raises(DomainError):
        far_case_bound(theta)
