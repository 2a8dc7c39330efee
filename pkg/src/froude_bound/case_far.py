"""Bound for crests well below stagnation, ``eta_hat <= theta * r``."""

from __future__ import annotations

from .core import CaseBound, bernoulli_from_depth, flow_force, script_S, solve_case
from .errors import DomainError

DEFAULT_THETA = 0.95


def far_gap(d: float, theta: float = DEFAULT_THETA) -> float:
    """``S(d) - script_S(theta r, r)``; positive exactly where the far-case inequality holds."""
    r = bernoulli_from_depth(d)
    return flow_force(d) - script_S(theta * r, r)


def far_case_bound(theta: float = DEFAULT_THETA) -> CaseBound:
    """Since ``script_S`` decreases beyond ``d_plus``, ``eta_hat <= theta r`` forces ``S > script_S(theta r, r)``."""
    if not 0 < theta <= 1:
        raise DomainError(f"theta must lie in (0, 1], got {theta!r}")
    return solve_case(lambda d: far_gap(d, theta), "far", beta=0.0, theta=theta)
