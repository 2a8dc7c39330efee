"""Uniform-stream relations in unit-flux, unit-gravity variables.

A uniform stream of depth ``d`` has Bernoulli constant ``r = 1/(2 d^2) + d``,
flow force ``S = d^2/2 + 1/d`` and Froude number ``d^(-3/2)``. Supercritical
depths ``d < 1`` are the ones that carry solitary waves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal

import numpy as np

from .errors import BracketError, CertificationError, DomainError
from .numerics import RootResult, find_root

CRITICAL_R = 1.5
R_MAX = 4.0 ** (1.0 / 3.0)
D_SQRT2 = 2.0 ** (-1.0 / 3.0)
DEPTH_BRACKET = (0.75, 0.9999)
REPORT_DECIMALS = 5


def _positive(name: str, value: float) -> None:
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value!r}")


def bernoulli_from_depth(d: float) -> float:
    _positive("d", d)
    return 1.0 / (2.0 * d * d) + d


def flow_force(d: float) -> float:
    _positive("d", d)
    return 0.5 * d * d + 1.0 / d


def froude(d: float) -> float:
    _positive("d", d)
    return d ** -1.5


def script_S(t: float, r: float) -> float:
    """Lower envelope ``r t - t^2/2 + 1/(2t)`` for the flow force under a crest of height ``t``."""
    _positive("t", t)
    return r * t - 0.5 * t * t + 0.5 / t


def script_S_prime(t: float, r: float) -> float:
    _positive("t", t)
    return r - t - 0.5 / (t * t)


# Rounding starts from the shortest repr so that re-rounding a reported
# value is a no-op (Decimal(1.37836) is slightly above 1.37836).
def round_down(x: float, decimals: int = REPORT_DECIMALS) -> float:
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(float(x))).quantize(q, rounding=ROUND_FLOOR))


def round_up(x: float, decimals: int = REPORT_DECIMALS) -> float:
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(float(x))).quantize(q, rounding=ROUND_CEILING))


@dataclass(frozen=True)
class ConjugatePair:
    d_minus: float
    d_plus: float


@dataclass(frozen=True)
class StreamState:
    d: float
    r: float
    S: float
    fr: float

    @classmethod
    def from_depth(cls, d: float) -> "StreamState":
        return cls(d, bernoulli_from_depth(d), flow_force(d), froude(d))

    @property
    def admissible(self) -> bool:
        return CRITICAL_R < self.r < R_MAX


def _cubic(r: float):
    return lambda d: 2.0 * d**3 - 2.0 * r * d * d + 1.0


def _newton_polish(r: float, d: float, steps: int = 3) -> float:
    for _ in range(steps):
        f = 2.0 * d**3 - 2.0 * r * d * d + 1.0
        fp = 6.0 * d * d - 4.0 * r * d
        if fp == 0:
            break
        step = f / fp
        d -= step
        if abs(step) < 1e-16 * max(1.0, abs(d)):
            break
    return d


def conjugate_depths(r: float) -> ConjugatePair:
    """Both positive roots of ``1/(2d^2) + d = r``.

    The cubic ``2d^3 - 2rd^2 + 1`` changes sign once on ``(0, 1]`` and once
    on ``[1, r)``; each root is bracketed separately and polished by Newton.
    ``r = 1.5`` returns the double root ``(1, 1)``.
    """
    if r < CRITICAL_R:
        raise DomainError(f"no real conjugate depths for r={r!r} < 1.5")
    if r == CRITICAL_R:
        return ConjugatePair(1.0, 1.0)
    f = _cubic(r)
    lower = find_root(f, 0.0, 1.0, tol=1e-14)
    upper = find_root(f, 1.0, r, tol=1e-14)
    return ConjugatePair(_newton_polish(r, lower.x), _newton_polish(r, upper.x))


def starr_check(d: float, eta_hat: float) -> float:
    """Slack ``1 + a/d - Fr^2`` of the amplitude inequality, with ``a = eta_hat - d``.

    A consistency probe only: it must be non-negative whenever
    ``flow_force(d) > script_S(eta_hat, r)``.
    """
    _positive("d", d)
    r = bernoulli_from_depth(d)
    d_plus = conjugate_depths(r).d_plus
    flat = d == 1.0 and eta_hat == 1.0
    if not flat and not (d_plus < eta_hat <= r * (1 + 1e-15)):
        raise DomainError(f"crest height {eta_hat!r} outside ({d_plus!r}, {r!r}]")
    return 1.0 + (eta_hat - d) / d - froude(d) ** 2


# --- scalar constants used in the lower velocity bound below the crest ---

SLOPE_BOUND = 0.60442942
G_SURFACE = 1.46484
VELOCITY_FACTOR_SQ = 0.46484
PSI_Y_BOTTOM_FACTOR = 0.9641
D_HOPF = 0.83197
CREST_FRACTION = 0.928
D_CREST_FRACTION = 0.8327
CREST_FRACTION_HALF_SQ = 0.430592


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    margin: float
    value: float
    target: float
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "value": self.value,
            "target": self.target,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class VerificationReport:
    name: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, key: str) -> CheckResult:
        for c in self.checks:
            if c.name == key:
                return c
        raise KeyError(key)

    def raise_for_failure(self) -> None:
        if not self.passed:
            raise CertificationError(
                f"{self.name}: failed sub-checks {self.failures}", step=self.failures[0]
            )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def verify_lemma_constants(grid_n: int = 10_000) -> VerificationReport:
    """Re-derive the printed constants behind the lower velocity bound.

    (a) surface value of ``2/(1+slope^2)``; (b) ``sqrt(2*0.46484) >= 0.9641``;
    (c) the depth where ``0.9641 sqrt(r) d = 1``; (d) the depth where
    ``S = script_S(0.928 r, r)``; (e) ``S < 1.46484 (0.928 - 0.430592) r^2``
    for every grid depth in ``(0, 1]``.

    Every printed constant is compared verbatim; margins are reported so
    that a rounding in the unfavourable direction would show up as a
    negative margin.
    """
    if grid_n < 100:
        raise ValueError("grid_n must be at least 100")
    checks = []

    g = 2.0 / (1.0 + SLOPE_BOUND**2)
    checks.append(CheckResult("a_surface_value", g >= G_SURFACE, g - G_SURFACE, g, G_SURFACE))

    v = math.sqrt(2.0 * VELOCITY_FACTOR_SQ)
    checks.append(
        CheckResult("b_bottom_velocity", v >= PSI_Y_BOTTOM_FACTOR, v - PSI_Y_BOTTOM_FACTOR, v, PSI_Y_BOTTOM_FACTOR)
    )

    hopf = find_root(
        lambda d: PSI_Y_BOTTOM_FACTOR * math.sqrt(bernoulli_from_depth(d)) * d - 1.0,
        *DEPTH_BRACKET,
    ).x
    checks.append(
        CheckResult("c_hopf_depth", abs(hopf - D_HOPF) <= 5e-5, 5e-5 - abs(hopf - D_HOPF), hopf, D_HOPF)
    )

    crest = find_root(
        lambda d: flow_force(d) - script_S(CREST_FRACTION * bernoulli_from_depth(d), bernoulli_from_depth(d)),
        *DEPTH_BRACKET,
    ).x
    checks.append(
        CheckResult(
            "d_crest_fraction_depth",
            abs(crest - D_CREST_FRACTION) <= 1e-4,
            1e-4 - abs(crest - D_CREST_FRACTION),
            crest,
            D_CREST_FRACTION,
        )
    )

    half_sq_ok = math.isclose(CREST_FRACTION_HALF_SQ, CREST_FRACTION**2 / 2, abs_tol=1e-15)
    coeff = G_SURFACE * (CREST_FRACTION - CREST_FRACTION_HALF_SQ)
    d = np.linspace(1.0 / grid_n, 1.0, grid_n)
    r = 1.0 / (2.0 * d * d) + d
    gap = coeff * r * r - (0.5 * d * d + 1.0 / d)
    k = int(np.argmin(gap))
    checks.append(
        CheckResult(
            "e_contradiction",
            bool(half_sq_ok and gap[k] > 0),
            float(gap[k]),
            float(d[k]),
            coeff,
            note=f"min of {coeff:.6f} r^2 - S over {grid_n} depths at d={d[k]:.6f}",
        )
    )
    return VerificationReport("lemma_constants", tuple(checks))


@dataclass(frozen=True)
class CaseBound:
    """Depth lower bound and Froude upper bound produced by one proof case.

    ``d_lower`` is the solved depth rounded down, ``fr_upper`` the Froude
    number of the solved depth rounded up, both to five decimals.
    """

    case_id: str
    beta: float
    theta: float
    d_lower: float
    fr_upper: float
    root: RootResult

    @property
    def d_raw(self) -> float:
        return self.root.x

    @property
    def fr_raw(self) -> float:
        return froude(self.root.x)

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "beta": self.beta,
            "theta": self.theta,
            "d_lower": self.d_lower,
            "fr_upper": self.fr_upper,
            "d_raw": self.d_raw,
            "fr_raw": self.fr_raw,
            "root": self.root.to_dict(),
        }


def solve_case(gap, case_id: str, beta: float = 0.0, theta: float = 0.95, side_samples: int = 5) -> CaseBound:
    """Solve ``gap(d) = S(d) - lower_bound(d) = 0`` on the standard depth bracket.

    The inequality ``S > lower_bound`` must fail just below the root and hold
    just above it; ``side_samples`` points on each side are checked.
    """
    root = find_root(gap, *DEPTH_BRACKET)
    lo, hi = DEPTH_BRACKET
    below = np.linspace(lo, root.x, side_samples + 2)[1:-1]
    above = np.linspace(root.x, hi, side_samples + 2)[1:-1]
    if any(gap(float(x)) >= 0 for x in below) or any(gap(float(x)) <= 0 for x in above):
        raise BracketError(f"{case_id}: unexpected sign pattern around d={root.x!r}")
    return CaseBound(case_id, beta, theta, round_down(root.x), round_up(froude(root.x)), root)
