"""
G-function criterion for laws whose background measure nu_X is finite.

With m = nu_X(R_+) and density g, mu = L(int_0^inf e^{-t} dX_t) is in the range under
sigma B_t + a t iff b_X = 0, t g(t) -> 0 at 0 and at infinity, and

    G(t) = (a + sigma^2 m) int_0^t g + (sigma^2/2) t g(t) - (sigma^2/2) int_0^t g*g

is non-decreasing. The pre-image is then eta with drift 0 and nu_eta = dG. Where g is
differentiable, G'(t) = (a + sigma^2 m + sigma^2/2) g + (sigma^2/2) t g' - (sigma^2/2) g*g.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import brentq

from levyrange.brownian.riccati import BmDriftParams, riccati_exponent
from levyrange.config import NumericsConfig
from levyrange.constants import G_PRIME_TOL, TAIL_MARGIN
from levyrange.exceptions import DomainError
from levyrange.levy.exponent import laplace_exponent_of
from levyrange.levy.measures import (
    ExpPolyDensity,
    LevyMeasureSpec,
    SumMeasure,
    TabulatedDensity,
    ZeroMeasure,
)
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import Decision, DriftEstimate, EtaWitness, RangeVerdict
from levyrange.ranges.laws import PositiveLawSpec
from levyrange.utils.logging import get_logger
from levyrange.utils.numerics import EPS, decade_points, quad_checked

logger = get_logger(__name__)

METHOD = "finite-k"
DensityFn = Callable[[float], float]

_LIMIT_POINTS_ZERO = (1e-6, 1e-8, 1e-10)
_LIMIT_POINTS_INF = (1e6, 1e8, 1e10)
_LIMIT_TOL = 1e-6
_JUMP_STEPS = 80
_JUMP_RELATIVE = 1e-8


@dataclass(frozen=True)
class _Background:
    density: DensityFn
    derivative: DensityFn
    mass: float
    lower: float
    upper: float


def _density_parts(measure: LevyMeasureSpec) -> list[LevyMeasureSpec] | None:
    if isinstance(measure, (ExpPolyDensity, TabulatedDensity)):
        return [measure]
    if isinstance(measure, SumMeasure):
        parts: list[LevyMeasureSpec] = []
        for part in measure.parts:
            inner = _density_parts(part)
            if inner is None:
                return None
            parts.extend(inner)
        return parts
    return None


def _safe_density(part: LevyMeasureSpec) -> DensityFn:
    lo, hi = part.support_bounds()  # type: ignore[attr-defined]

    def density(t: float) -> float:
        if t <= 0 or t < lo or t > hi:
            return 0.0
        return float(part.density(t))  # type: ignore[attr-defined]

    return density


def _derivative(part: LevyMeasureSpec, density: DensityFn) -> DensityFn:
    if isinstance(part, ExpPolyDensity) and part.derivative_fn is not None:
        return lambda t: part.density_derivative(t) or 0.0

    def central(t: float) -> float:
        h = t * EPS ** (1.0 / 3.0)
        return (density(t + h) - density(t - h)) / (2.0 * h)

    return central


def _background(measure: LevyMeasureSpec) -> _Background | None:
    parts = _density_parts(measure)
    if parts is None:
        return None
    densities = [_safe_density(part) for part in parts]
    derivatives = [_derivative(part, d) for part, d in zip(parts, densities, strict=False)]
    bounds = [part.support_bounds() for part in parts]  # type: ignore[attr-defined]
    return _Background(
        density=lambda t: math.fsum(d(t) for d in densities),
        derivative=lambda t: math.fsum(d(t) for d in derivatives),
        mass=measure.total_mass(),
        lower=min(lo for lo, _ in bounds),
        upper=max(hi for _, hi in bounds),
    )


def self_convolution(g: DensityFn, t: float, upper: float = math.inf) -> float:
    """(g*g)(t) = 2 int_0^{t/2} g(s) g(t-s) ds."""
    if t <= 0:
        return 0.0
    half = 0.5 * t
    hi = min(half, upper)
    if hi <= 0:
        return 0.0
    return 2.0 * quad_checked(
        lambda s: g(s) * g(t - s),
        0.0,
        hi,
        points=decade_points(hi * 1e-8, hi),
        label="self_convolution",
    )


def _g_prime_terms(bg: _Background, p: BmDriftParams, t: float) -> tuple[float, float, float]:
    level = p.a + p.sigma2 * bg.mass + p.half_sigma2
    return (
        level * bg.density(t),
        p.half_sigma2 * t * bg.derivative(t),
        -p.half_sigma2 * self_convolution(bg.density, t, bg.upper),
    )


def g_prime(mu: PositiveLawSpec, p: BmDriftParams, t: float) -> float:
    """G'(t) for a law with a finite background density."""
    bg = _require_background(mu)
    return math.fsum(_g_prime_terms(bg, p, t))


def _require_background(mu: PositiveLawSpec) -> _Background:
    if mu.nuX is None or not mu.nuX.is_finite():
        raise DomainError("finite-k criterion needs a finite background measure nu_X")
    bg = _background(mu.nuX)
    if bg is None:
        raise DomainError("finite-k criterion needs nu_X given by a density")
    return bg


def _limit_vanishes(h: DensityFn, points: Sequence[float], scale: float) -> bool:
    values = [abs(h(t)) for t in points]
    decreasing = all(b < a for a, b in zip(values, values[1:], strict=False))
    return decreasing or values[-1] <= _LIMIT_TOL * (1.0 + scale)


def downward_jump(g: DensityFn, lo: float, hi: float) -> float | None:
    """
    Location of a downward jump of g in (lo, hi], located by log-bisection, or None.

    A continuous decrease loses at least half of the initial drop within a few halvings; a jump
    keeps it down to interval widths at roundoff level.
    """
    drop = g(lo) - g(hi)
    if drop <= 0:
        return None
    left, right = lo, hi
    for _ in range(_JUMP_STEPS):
        mid = math.sqrt(left * right)
        if not left < mid < right:
            break
        drop_left = g(left) - g(mid)
        drop_right = g(mid) - g(right)
        if max(drop_left, drop_right) < 0.5 * drop:
            return None
        if drop_left >= drop_right:
            right = mid
        else:
            left = mid
    return right


def _find_downward_jump(g: DensityFn, grid: np.ndarray, upper: float) -> float | None:
    points = list(grid)
    if math.isfinite(upper):
        points.extend([upper * (1 - 1e-9), upper * (1 + 1e-9)])
    points = sorted(set(points))
    values = np.array([g(t) for t in points])
    threshold = _JUMP_RELATIVE * float(np.max(np.abs(values))) if values.size else 0.0
    for i in range(len(points) - 1):
        if values[i] - values[i + 1] > threshold:
            location = downward_jump(g, points[i], points[i + 1])
            if location is not None:
                return location
    return None


def _tail_limit(grid: np.ndarray, q: np.ndarray) -> float | None:
    """Least-squares fit q(t) = q_inf + beta / t over the last decade of the grid."""
    mask = (grid >= grid[-1] / 10.0) & np.isfinite(q)
    if np.count_nonzero(mask) < 3:
        return None
    design = np.column_stack([np.ones(np.count_nonzero(mask)), 1.0 / grid[mask]])
    coefficients, *_ = np.linalg.lstsq(design, q[mask], rcond=None)
    return float(coefficients[0])


def _verdict(
    decision: Decision,
    certificate: str,
    *,
    witness: EtaWitness | None = None,
    details: dict[str, object] | None = None,
) -> RangeVerdict:
    logger.info("range_check_completed", method=METHOD, decision=decision.value)
    return RangeVerdict(decision, certificate, METHOD, witness, dict(details or {}))


def finite_k_check(
    mu: PositiveLawSpec, p: BmDriftParams, numerics: NumericsConfig | None = None
) -> RangeVerdict:
    """
    Decide membership through the monotonicity of G on the G-grid plus a tail certificate.

    Raises:
        DomainError: If nu_X is absent, infinite, or not given by a density
    """
    numerics = numerics or NumericsConfig()
    if mu.nuX is None or not mu.nuX.is_finite():
        raise DomainError("finite-k criterion needs a finite background measure nu_X")
    if mu.b_X != 0:
        return _verdict(
            Decision.REJECT,
            f"background drift b_X = {mu.b_X:g} != 0; laws in the range have b_X = 0",
        )
    if mu.nuX.is_zero():
        witness = EtaWitness(
            riccati_exponent(laplace_exponent_of(LevyTriplet.drift(0.0)), p),
            DriftEstimate(0.0, True, 0.0),
            LevyTriplet.drift(0.0),
        )
        return _verdict(Decision.ACCEPT, "mu = delta_0 is the image of eta = 0", witness=witness)
    bg = _background(mu.nuX)
    if bg is None:
        return _verdict(Decision.REJECT, "nu_X has no density; laws in the range require one")

    grid = numerics.g_grid()
    details: dict[str, object] = {"theta": p.theta, "mass": bg.mass}

    def t_g(t: float) -> float:
        return t * bg.density(t)

    scale = max(abs(t_g(float(t))) for t in grid)
    if not _limit_vanishes(t_g, _LIMIT_POINTS_ZERO, scale):
        return _verdict(Decision.REJECT, "t g(t) does not vanish as t -> 0", details=details)
    if not _limit_vanishes(t_g, _LIMIT_POINTS_INF, scale):
        return _verdict(Decision.REJECT, "t g(t) does not vanish as t -> inf", details=details)

    jump = _find_downward_jump(bg.density, grid, bg.upper)
    if jump is not None:
        details["jump_at"] = jump
        return _verdict(
            Decision.REJECT,
            f"density g has a downward jump at t={jump:.6g}, which G cannot absorb",
            details=details,
        )

    terms = np.array([_g_prime_terms(bg, p, float(t)) for t in grid])
    values = terms.sum(axis=1)
    magnitude = np.abs(terms).sum(axis=1)
    violating = np.nonzero(values < -G_PRIME_TOL * (1.0 + magnitude))[0]
    if violating.size:
        location = _locate_violation(bg, p, grid, int(violating[0]))
        details["first_violation"] = location
        logger.info("finite_k_violation_located", t=location, theta=p.theta)
        return _verdict(
            Decision.REJECT,
            f"G'(t) < 0 from t={location:.6g}; G is not non-decreasing",
            details=details,
        )

    with np.errstate(divide="ignore", invalid="ignore"):
        relative = np.where(magnitude > 0, values / magnitude, np.nan)
    q_inf = _tail_limit(grid, relative)
    details["tail_limit"] = q_inf
    if q_inf is not None and q_inf < -TAIL_MARGIN:
        return _verdict(
            Decision.REJECT,
            f"G' turns negative beyond the grid (relative tail limit {q_inf:.3g})",
            details=details,
        )
    if q_inf is not None and q_inf < TAIL_MARGIN:
        return _verdict(
            Decision.INCONCLUSIVE,
            f"G' >= 0 on the grid but its relative tail limit {q_inf:.3g} is within the margin",
            details=details,
        )

    witness = _witness(mu, p, grid, np.maximum(values, 0.0))
    return _verdict(
        Decision.ACCEPT,
        f"G' >= 0 on [{grid[0]:.3g}, {grid[-1]:.3g}] with a positive tail",
        witness=witness,
        details=details,
    )


def _locate_violation(bg: _Background, p: BmDriftParams, grid: np.ndarray, index: int) -> float:
    if index == 0:
        return float(grid[0])

    def value(t: float) -> float:
        return math.fsum(_g_prime_terms(bg, p, t))

    lo, hi = float(grid[index - 1]), float(grid[index])
    if value(lo) * value(hi) >= 0:
        return hi
    return float(brentq(value, lo, hi, xtol=1e-12, rtol=4 * EPS))


def _witness(
    mu: PositiveLawSpec, p: BmDriftParams, grid: np.ndarray, density: np.ndarray
) -> EtaWitness:
    assert mu.nuX is not None
    measure: LevyMeasureSpec
    if np.any(density > 0):
        measure = TabulatedDensity(tuple(float(t) for t in grid), tuple(float(v) for v in density))
    else:
        measure = ZeroMeasure()
    cumulative = cumulative_trapezoid(density, grid, initial=0.0)
    tail = cumulative[-1] - cumulative
    psi_X = laplace_exponent_of(LevyTriplet.subordinator(0.0, mu.nuX))
    return EtaWitness(
        exponent=riccati_exponent(psi_X, p),
        drift=DriftEstimate(0.0, True, 0.0),
        triplet=LevyTriplet.subordinator(0.0, measure),
        tail_table=tuple((float(t), float(v)) for t, v in zip(grid, tail, strict=False)),
    )


def critical_drift(
    mu: PositiveLawSpec,
    sigma: float,
    a_values: Sequence[float],
    numerics: NumericsConfig | None = None,
) -> float | None:
    """
    Smallest a in the sorted grid from which finite_k_check accepts for every larger grid value.

    None when the largest value is not accepted.
    """
    threshold = None
    for a in sorted(a_values, reverse=True):
        verdict = finite_k_check(mu, BmDriftParams(a, sigma), numerics)
        if verdict.decision is not Decision.ACCEPT:
            break
        threshold = a
    logger.info("critical_drift_found", sigma=sigma, threshold=threshold)
    return threshold
