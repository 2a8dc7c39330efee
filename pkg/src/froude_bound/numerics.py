"""Scalar root finding, adaptive quadrature, finite differences and
sampled sign certification over rectangular or triangular 2-D grids.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import AccuracyError, AmbiguityError, BracketError, EvaluationError

PRESCAN_POINTS = 1000
DEFAULT_ROOT_TOL = 1e-12
MAX_SIMPSON_DEPTH = 40


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BracketError(f"degenerate bracket [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class RootResult:
    x: float
    residual: float
    iterations: int
    bracket: Bracket
    unique_sign_change: bool

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "residual": self.residual,
            "iterations": self.iterations,
            "bracket": [self.bracket.lo, self.bracket.hi],
            "unique_sign_change": self.unique_sign_change,
        }


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_ROOT_TOL,
    prescan: int = PRESCAN_POINTS,
) -> RootResult:
    """Locate the single sign change of ``f`` on ``[lo, hi]``.

    The interval is first sampled at ``prescan`` equal steps. Exactly one
    sign change must be present: none raises :class:`BracketError` (this
    includes tangent roots), several raise :class:`AmbiguityError`. The
    isolated sub-bracket is then refined with Brent's method so that the
    returned ``x`` is within ``tol`` of the crossing.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not lo < hi:
        raise BracketError(f"empty interval [{lo}, {hi}]")

    xs = np.linspace(lo, hi, prescan + 1)
    fs = np.array([f(float(x)) for x in xs])
    if not np.all(np.isfinite(fs)):
        bad = xs[~np.isfinite(fs)][0]
        raise EvaluationError(f"non-finite value during pre-scan at x={bad!r}")

    # Exact zeros count as crossings located at the sample itself.
    sign = np.sign(fs)
    crossings = []
    for i in range(prescan):
        if sign[i] == 0:
            crossings.append((i, i))
        elif sign[i] * sign[i + 1] < 0:
            crossings.append((i, i + 1))
    if sign[-1] == 0:
        crossings.append((prescan, prescan))
    # collapse a zero sample adjacent to its own bracket
    merged = []
    for c in crossings:
        if merged and c[0] <= merged[-1][1]:
            continue
        merged.append(c)

    if not merged:
        raise BracketError(
            f"no sign change of f on [{lo}, {hi}] "
            f"(f(lo)={fs[0]:.3e}, f(hi)={fs[-1]:.3e})"
        )
    if len(merged) > 1:
        where = ", ".join(f"{xs[i]:.6g}" for i, _ in merged[:5])
        raise AmbiguityError(f"{len(merged)} sign changes on [{lo}, {hi}] near {where}")

    i, j = merged[0]
    if i == j:
        x = float(xs[i])
        a = float(xs[max(i - 1, 0)])
        b = float(xs[min(i + 1, prescan)])
        bracket = Bracket(a, b, float(f(a)), float(f(b)))
        return RootResult(x, 0.0, 0, bracket, True)

    a, b = float(xs[i]), float(xs[j])
    bracket = Bracket(a, b, float(fs[i]), float(fs[j]))
    x, info = brentq(f, a, b, xtol=tol / 4, rtol=4 * np.finfo(float).eps, full_output=True)
    return RootResult(float(x), float(f(x)), int(info.iterations), bracket, True)


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = MAX_SIMPSON_DEPTH,
) -> float:
    """Adaptive Simpson quadrature with absolute error target ``tol``.

    Each panel must meet its share of ``tol``; panels that reach
    ``max_depth`` are accepted only while the summed error estimate over
    all panels stays below ``tol``.

    Raises:
        AccuracyError: the depth cap was reached and the estimated error
            exceeds ``tol``; the partial estimate is attached.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a == b:
        return 0.0
    if a > b:
        return -integrate_adaptive(f, b, a, tol, max_depth)

    fa, fb, m = f(a), f(b), 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    exhausted = []

    # explicit stack instead of recursion: (a, b, fa, fm, fb, whole, tol, depth)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = err = 0.0
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
            err += abs(delta) / 15.0
        elif depth >= max_depth:
            total += left + right + delta / 15.0
            err += abs(delta) / 15.0
            exhausted.append((a, b))
        else:
            stack.append((m, b, fm, frm, fb, right, 0.5 * eps, depth + 1))
            stack.append((a, m, fa, flm, fm, left, 0.5 * eps, depth + 1))

    if not math.isfinite(total):
        raise EvaluationError("non-finite integrand value")
    # Capped panels are tolerated while the summed error estimate still meets tol;
    # the per-panel split is too strict next to sqrt-type endpoints.
    if exhausted and err > tol:
        raise AccuracyError(
            f"depth {max_depth} exhausted on {len(exhausted)} panel(s), first at {exhausted[0]}; "
            f"estimated error {err:.3e} > {tol:.3e}",
            estimate=total,
        )
    return total


def finite_difference(f: Callable[[float], float], x: float, h: float = 1e-6) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid for :func:`certify_negative`.

    With ``triangular=True`` the y-samples of each row run from
    ``y_range[0]`` to ``min(y_range[1], x)``, i.e. points with ``y > x``
    are never evaluated and the diagonal ``y = x`` is always sampled.
    ``exclude_singular_edge`` drops the last y-sample of every row (the
    upper edge), for integrands that blow up there.
    """

    x_range: tuple[float, float]
    y_range: tuple[float, float]
    nx: int
    ny: int
    boundary_policy: str = "include"
    triangular: bool = False

    def __post_init__(self):
        if self.nx < 2 and self.x_range[0] != self.x_range[1]:
            raise ValueError("nx must be >= 2 for a non-degenerate x range")
        if self.ny < 2 and self.y_range[0] != self.y_range[1]:
            raise ValueError("ny must be >= 2 for a non-degenerate y range")
        if self.x_range[0] > self.x_range[1] or self.y_range[0] > self.y_range[1]:
            raise ValueError("ranges must be ordered")
        if self.boundary_policy not in ("include", "exclude_singular_edge"):
            raise ValueError(f"unknown boundary policy {self.boundary_policy!r}")

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    def row(self, x: float) -> np.ndarray:
        hi = min(self.y_range[1], x) if self.triangular else self.y_range[1]
        if hi < self.y_range[0]:
            return np.empty(0)
        ys = np.linspace(self.y_range[0], hi, self.ny)
        if self.boundary_policy == "exclude_singular_edge":
            ys = ys[:-1]
        return ys

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """All grid points in row-major order (x outer, y inner)."""
        xs, ys = [], []
        for x in self.xs():
            row = self.row(x)
            xs.append(np.full(row.shape, x))
            ys.append(row)
        return np.concatenate(xs), np.concatenate(ys)

    def to_dict(self) -> dict:
        return {
            "x_range": list(self.x_range),
            "y_range": list(self.y_range),
            "nx": self.nx,
            "ny": self.ny,
            "boundary_policy": self.boundary_policy,
            "triangular": self.triangular,
        }


@dataclass(frozen=True)
class GridCertificate:
    region: GridSpec
    max_value: float
    worst_cell: tuple[float, float]
    margin: float
    rigor: str = "sampled"
    samples: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_value < 0

    def to_dict(self) -> dict:
        return {
            "region": self.region.to_dict(),
            "max_value": self.max_value,
            "worst_cell": list(self.worst_cell),
            "margin": self.margin,
            "rigor": self.rigor,
            "samples": self.samples,
            "passed": self.passed,
            **({"notes": self.notes} if self.notes else {}),
        }


def _block_max(f, region: GridSpec, xs: np.ndarray):
    best = (-math.inf, (math.nan, math.nan), 0)
    count = 0
    for x in xs:
        ys = region.row(float(x))
        if ys.size == 0:
            continue
        vals = np.broadcast_to(np.asarray(f(np.full(ys.shape, x), ys), dtype=float), ys.shape)
        bad = ~np.isfinite(vals)
        if bad.any():
            y_bad = float(ys[bad][0])
            raise EvaluationError(f"non-finite value at ({float(x)!r}, {y_bad!r})")
        count += ys.size
        k = int(np.argmax(vals))
        if vals[k] > best[0]:
            best = (float(vals[k]), (float(x), float(ys[k])), 0)
    return best[0], best[1], count


def certify_negative(f, region: GridSpec, workers: int = 1) -> GridCertificate:
    """Sample the vectorised function ``f(x, y)`` on ``region`` and record its maximum.

    Rows are split into contiguous blocks, one per worker, and merged by
    taking the largest maximum; ties go to the earliest block, so the
    result does not depend on ``workers``.
    """
    xs = region.xs()
    workers = max(1, min(int(workers), len(xs)))
    blocks = np.array_split(xs, workers)
    if workers == 1:
        results = [_block_max(f, region, blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: _block_max(f, region, b), blocks))

    max_value, worst, total = -math.inf, (math.nan, math.nan), 0
    for value, cell, count in results:
        total += count
        if value > max_value:
            max_value, worst = value, cell
    return GridCertificate(region, max_value, worst, -max_value, "sampled", total)
