"""Bound for crests close to stagnation, ``eta_hat > (1 - beta) r``.

Below the crest the horizontal velocity is bounded by the envelope
``phi(y) = sqrt(2s) (1 - A(s)/2)`` with ``s = r - y`` and
``A(s) = c (s^(3/2) - (beta r)^(3/2)) / s``, where the coefficient
``c = 2 d sqrt(2 (S/r - r/2)) / (3 sqrt(r))`` carries the bottom velocity
bound ``psi_y(0, 0) >= sqrt(2 (S/r - r/2))``.

In ``s`` the integrand ``1/r - phi`` is a sum of powers
``s^0, s^(1/2), s, s^(-1/2)``, so both integrals entering ``Jbar`` have
elementary antiderivatives; the square contributes an ``s^(-1)`` term
whose antiderivative is ``log s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CaseBound,
    CheckResult,
    VerificationReport,
    bernoulli_from_depth,
    flow_force,
    solve_case,
)
from .errors import ConsistencyError, DomainError
from .numerics import integrate_adaptive

SQRT2 = math.sqrt(2.0)
ORACLE_TOL = 1e-8
FEASIBILITY_SAMPLES = 1000


@dataclass(frozen=True)
class CloseParams:
    d: float
    r: float
    S: float
    beta: float
    c: float
    b: float
    y1c: float

    @property
    def top(self) -> float:
        """Upper integration limit ``(1 - beta) r``."""
        return (1.0 - self.beta) * self.r


def close_params(d: float, beta: float, c: float | None = None) -> CloseParams:
    """Assemble the close-case parameters for depth ``d``.

    ``c`` may be overridden (e.g. ``c=0`` reduces the envelope to
    ``sqrt(2(r - y))``). ``y1c`` is NaN when the reference point
    ``1/(2r^2)`` falls below ``beta r``.
    """
    if not 0 <= beta < 1:
        raise DomainError(f"beta must lie in [0, 1), got {beta!r}")
    r = bernoulli_from_depth(d)
    S = flow_force(d)
    bottom = S / r - r / 2.0
    if not bottom > 0:
        raise DomainError(f"S/r - r/2 = {bottom!r} is not positive at d={d!r}")
    if c is None:
        c = 2.0 * d * math.sqrt(2.0 * bottom) / (3.0 * math.sqrt(r))
    b = beta * r
    s0 = 0.5 / (r * r)
    y1c = math.nan
    if s0 >= b:
        a0 = c * (s0**1.5 - b**1.5) / s0
        if a0 < 2.0:
            y1c = r - s0 / (1.0 - 0.5 * a0) ** 2
    return CloseParams(d, r, S, beta, c, b, y1c)


def coef_A(s: float, p: CloseParams) -> float:
    if not s > 0 or s < p.b * (1 - 1e-12):
        raise DomainError(f"s={s!r} outside [beta r, inf) = [{p.b!r}, inf)")
    s = max(s, p.b)
    return p.c * (s**1.5 - p.b**1.5) / s


def _phi_s(s, p: CloseParams):
    """Envelope written in ``s = r - y``; vectorised, no domain checks."""
    k = p.c / SQRT2
    root = np.sqrt(s)
    out = SQRT2 * root - k * s
    if p.b > 0:
        out = out + k * p.b**1.5 / root
    return out


def phi(y: float, p: CloseParams) -> float:
    if not -1e-15 <= y <= p.top * (1 + 1e-15):
        raise DomainError(f"y={y!r} outside [0, (1 - beta) r] = [0, {p.top!r}]")
    s = max(p.r - y, p.b)
    if s == 0:
        return 0.0
    return math.sqrt(2.0 * s) * (1.0 - 0.5 * coef_A(s, p))


def y1_close(p: CloseParams) -> float:
    s0 = 0.5 / (p.r * p.r)
    a0 = coef_A(s0, p)
    if a0 >= 2.0:
        raise DomainError(f"A(1/(2r^2)) = {a0!r} >= 2, envelope estimate degenerates")
    return p.r - s0 / (1.0 - 0.5 * a0) ** 2


def feasibility(p: CloseParams, samples: int = FEASIBILITY_SAMPLES) -> VerificationReport:
    """(a) ``beta < 1/(2r^3)``; (b) ``y1 < (1 - beta) r``;
    (c) ``phi < 1/r`` sampled on ``[y1, (1 - beta) r]``; (d) ``phi((1 - beta) r) < 1/r``.
    """
    checks = []
    limit = 1.0 / (2.0 * p.r**3)
    checks.append(CheckResult("a_beta_limit", p.beta < limit, limit - p.beta, p.beta, limit))
    y1_ok = math.isfinite(p.y1c) and p.y1c < p.top
    checks.append(CheckResult("b_y1_below_top", y1_ok, p.top - p.y1c, p.y1c, p.top))
    if y1_ok:
        s = p.r - np.linspace(p.y1c, p.top, samples)
        vals = _phi_s(s, p)
        k = int(np.argmax(vals))
        checks.append(CheckResult("c_phi_below_inverse_r", bool(vals[k] < 1.0 / p.r),
                                  1.0 / p.r - float(vals[k]), float(vals[k]), 1.0 / p.r))
    else:
        checks.append(CheckResult("c_phi_below_inverse_r", False, math.nan, math.nan, 1.0 / p.r,
                                  note="skipped: y1 not below (1 - beta) r"))
    end = math.sqrt(2.0 * p.b)
    checks.append(CheckResult("d_phi_at_top", end < 1.0 / p.r, 1.0 / p.r - end, end, 1.0 / p.r))
    return VerificationReport("feasibility", tuple(checks))


def _integrand_powers(p: CloseParams) -> dict[float, float]:
    """``1/r - phi`` as ``{power: coefficient}`` in ``s``."""
    k = p.c / SQRT2
    return {0.0: 1.0 / p.r, 0.5: -SQRT2, 1.0: k, -0.5: -k * p.b**1.5}


def _square(poly: dict[float, float]) -> dict[float, float]:
    out: dict[float, float] = {}
    for pi, ci in poly.items():
        for pj, cj in poly.items():
            out[pi + pj] = out.get(pi + pj, 0.0) + ci * cj
    return out


def _antiderivative(poly: dict[float, float], s: float) -> float:
    total = 0.0
    for power, coef in poly.items():
        if coef == 0.0:
            continue
        if power == -1.0:
            total += coef * math.log(s)
        else:
            total += coef * s ** (power + 1.0) / (power + 1.0)
    return total


def _check_feasible(p: CloseParams) -> None:
    rep = feasibility(p)
    if not rep.passed:
        raise DomainError(f"infeasible close-case state d={p.d!r}, beta={p.beta!r}: {rep.failures}")


def jbar_integrals(p: CloseParams, method: str = "closed") -> tuple[float, float]:
    """``(int (1/r - phi) dy, int (1/r - phi)^2 dy)`` over ``[y1, (1 - beta) r]``.

    ``method="closed"`` uses the antiderivatives in ``s``; ``method="quadrature"``
    integrates the envelope directly in ``y`` by adaptive Simpson.
    """
    if method == "closed":
        lin = _integrand_powers(p)
        sq = _square(lin)
        s_hi, s_lo = p.r - p.y1c, p.b
        return (
            _antiderivative(lin, s_hi) - _antiderivative(lin, s_lo),
            _antiderivative(sq, s_hi) - _antiderivative(sq, s_lo),
        )
    if method == "quadrature":
        inv_r = 1.0 / p.r

        def gap(y):
            return inv_r - float(_phi_s(max(p.r - y, p.b), p)) if p.r - y > 0 else inv_r

        return (
            integrate_adaptive(gap, p.y1c, p.top, tol=1e-13),
            integrate_adaptive(lambda y: gap(y) ** 2, p.y1c, p.top, tol=1e-13),
        )
    raise ValueError(f"unknown method {method!r}")


def jbar_from_params(p: CloseParams, cross_check: bool = True) -> float:
    _check_feasible(p)
    lin, sq = jbar_integrals(p, "closed")
    if cross_check:
        qlin, qsq = jbar_integrals(p, "quadrature")
        err = max(abs(lin - qlin), abs(sq - qsq))
        if err > ORACLE_TOL:
            raise ConsistencyError(f"closed form and quadrature differ by {err:.3e} at d={p.d!r}, beta={p.beta!r}")
    return p.r**2 / 2.0 + 0.5 / p.r + lin * lin / (2.0 * p.y1c) + 0.5 * sq


def jbar(d: float, beta: float, cross_check: bool = True) -> float:
    """Close-case lower bound for the flow force at depth ``d``.

    With ``cross_check`` the closed form is compared with adaptive quadrature
    and :class:`ConsistencyError` is raised above ``1e-8``.
    """
    return jbar_from_params(close_params(d, beta), cross_check=cross_check)


def close_gap(d: float, beta: float) -> float:
    return flow_force(d) - jbar(d, beta, cross_check=False)


def close_bound(beta: float) -> CaseBound:
    """Solve ``S(d) = Jbar(d, beta)``; the solved state is re-checked by quadrature."""
    if not 0 <= beta <= 0.05:
        raise DomainError(f"beta must lie in [0, 0.05] for the close case, got {beta!r}")
    bound = solve_case(lambda d: close_gap(d, beta), "close", beta=beta)
    jbar(bound.d_raw, beta, cross_check=True)
    return bound
