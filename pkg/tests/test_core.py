import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from froude_bound.core import (
    D_SQRT2,
    R_MAX,
    StreamState,
    bernoulli_from_depth,
    conjugate_depths,
    flow_force,
    froude,
    round_down,
    round_up,
    script_S,
    script_S_prime,
    starr_check,
    verify_lemma_constants,
)
from froude_bound.errors import DomainError

# 40-digit mpmath evaluations
R_082062 = 1.563101795212115172153305
S_082062 = 1.555299413773931905144890
SS_095 = 1.555272635211747044633874
S_SQRT2 = 1.574901312368591455959013


def test_bernoulli_examples():
    assert bernoulli_from_depth(1.0) == 1.5
    assert bernoulli_from_depth(D_SQRT2) == pytest.approx(R_MAX, rel=1e-15)
    assert bernoulli_from_depth(0.82062) == pytest.approx(R_082062, rel=1e-14)


def test_bernoulli_exact_rational():
    d = Fraction(4, 5)
    assert bernoulli_from_depth(0.8) == pytest.approx(float(1 / (2 * d * d) + d), rel=1e-15)


@pytest.mark.parametrize("func", [bernoulli_from_depth, flow_force, froude])
@pytest.mark.parametrize("d", [0.0, -0.5])
def test_nonpositive_depth_rejected(func, d):
    with pytest.raises(DomainError):
        func(d)


def test_flow_force_examples():
    assert flow_force(1.0) == 1.5
    assert flow_force(D_SQRT2) == pytest.approx(S_SQRT2, rel=1e-15)
    assert flow_force(0.82062) == pytest.approx(S_082062, rel=1e-14)


def test_froude_examples():
    assert froude(1.0) == 1.0
    assert froude(D_SQRT2) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert froude(0.80719) == pytest.approx(1.37891, abs=5e-5)


def test_script_S_examples():
    d = 0.81
    assert script_S(d, bernoulli_from_depth(d)) == pytest.approx(flow_force(d), rel=1e-14)
    r = 1.55
    assert script_S(r, r) == pytest.approx(r * r / 2 + 1 / (2 * r), rel=1e-15)
    assert script_S(0.95 * 1.56308, 1.56308) == pytest.approx(SS_095, rel=1e-14)
    assert abs(script_S(0.95 * 1.56308, 1.56308) - flow_force(0.82062)) < 3e-5
    with pytest.raises(DomainError):
        script_S(0.0, 1.5)


def test_conjugate_depths_examples():
    assert conjugate_depths(1.5) == (conjugate_depths(1.5).__class__(1.0, 1.0))
    pair = conjugate_depths(R_MAX)
    assert pair.d_minus == pytest.approx(D_SQRT2, abs=1e-13)
    r = bernoulli_from_depth(0.80719)
    assert conjugate_depths(r).d_minus == pytest.approx(0.80719, abs=1e-12)
    with pytest.raises(DomainError):
        conjugate_depths(1.4999)


@pytest.mark.parametrize("r", [1.5000001, 1.52, 1.55, 1.58, R_MAX])
def test_conjugate_residuals(r):
    pair = conjugate_depths(r)
    assert pair.d_minus <= 1.0 <= pair.d_plus
    for d in (pair.d_minus, pair.d_plus):
        assert abs(2 * d**3 - 2 * r * d * d + 1) <= 1e-12


def test_conjugate_roundtrip_grid():
    worst = 0.0
    for d in np.arange(0.75, 0.9999, 1e-3):
        worst = max(worst, abs(conjugate_depths(bernoulli_from_depth(d)).d_minus - d))
    assert worst <= 1e-10


@settings(max_examples=200, deadline=None)
@given(st.floats(0.75, 0.9999))
def test_roundtrip_property(d):
    assert conjugate_depths(bernoulli_from_depth(d)).d_minus == pytest.approx(d, abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.5, 0.9999))
def test_script_S_touches_flow_force(d):
    assert script_S(d, bernoulli_from_depth(d)) == pytest.approx(flow_force(d), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(1.5001, R_MAX))
def test_script_S_stationary_at_conjugates(r):
    pair = conjugate_depths(r)
    assert abs(script_S_prime(pair.d_minus, r)) <= 1e-10
    assert abs(script_S_prime(pair.d_plus, r)) <= 1e-10


@pytest.mark.parametrize("r", [1.51, 1.55, 1.5874])
def test_script_S_decreasing_beyond_d_plus(r):
    d_plus = conjugate_depths(r).d_plus
    ts = np.linspace(d_plus + 1e-6, r, 500)
    vals = [script_S(t, r) for t in ts]
    assert np.all(np.diff(vals) < 0)


def test_sqrt2_endpoint():
    from froude_bound.numerics import find_root

    root = find_root(lambda d: flow_force(d) - script_S(bernoulli_from_depth(d), bernoulli_from_depth(d)), 0.75, 0.9999)
    assert root.x == pytest.approx(D_SQRT2, abs=1e-10)
    assert froude(root.x) == pytest.approx(math.sqrt(2), abs=1e-9)


def test_stream_state_identities():
    st_ = StreamState.from_depth(0.8)
    assert st_.r == pytest.approx(1 / (2 * 0.64) + 0.8, rel=1e-14)
    assert st_.S == pytest.approx(0.32 + 1.25, rel=1e-14)
    assert st_.fr > 1
    assert st_.admissible
    assert not StreamState.from_depth(0.7).admissible


def test_starr_check():
    assert starr_check(1.0, 1.0) == 0.0
    d = 0.80719
    assert starr_check(d, bernoulli_from_depth(d)) > 0
    assert starr_check(D_SQRT2, bernoulli_from_depth(D_SQRT2)) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(DomainError):
        starr_check(0.8, 1.0)


def test_starr_implied_by_flow_force_inequality():
    # wherever S > script_S(eta_hat) holds the slack must be non-negative
    for d in np.linspace(0.76, 0.99, 40):
        r = bernoulli_from_depth(d)
        d_plus = conjugate_depths(r).d_plus
        for eta in np.linspace(d_plus + 1e-9, r, 40):
            if flow_force(d) > script_S(eta, r):
                assert starr_check(d, eta) >= -1e-14


def test_rounding_direction_and_idempotence():
    assert round_down(0.8073988) == 0.80739
    assert round_up(1.3783764) == 1.37838
    assert round_up(round_up(1.3783581)) == 1.37836
    assert round_down(round_down(0.807)) == 0.807


def test_lemma_constants():
    rep = verify_lemma_constants(10_000)
    assert rep.passed, rep.to_dict()
    assert rep["a_surface_value"].value == pytest.approx(1.4648420436576421, rel=1e-15)
    assert rep["b_bottom_velocity"].value == pytest.approx(math.sqrt(0.92968), rel=1e-15)
    assert rep["c_hopf_depth"].value == pytest.approx(0.83197, abs=5e-5)
    assert rep["d_crest_fraction_depth"].value == pytest.approx(0.8327, abs=1e-4)


def test_lemma_contradiction_at_critical_depth():
    coeff = 1.46484 * (0.928 - 0.430592)
    assert flow_force(1.0) < coeff * bernoulli_from_depth(1.0) ** 2
    assert coeff * 2.25 == pytest.approx(1.6394, abs=1e-4)


def test_lemma_grid_minimum():
    with pytest.raises(ValueError):
        verify_lemma_constants(50)
