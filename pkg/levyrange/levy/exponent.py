"""
Laplace exponents psi(u) = log E[e^{-u X_1}] of subordinators and related helpers.

Sign convention: psi <= 0 for subordinators, so -psi is the Bernstein function.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from levyrange.constants import DRIFT_LIMIT_K_MAX, DRIFT_LIMIT_K_MIN, DRIFT_LIMIT_TOL
from levyrange.exceptions import DomainError, NumericError
from levyrange.levy.measures import (
    AtomMeasure,
    LevyMeasureSpec,
    StableDensity,
    SumMeasure,
    ZeroMeasure,
)
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import DriftEstimate
from levyrange.utils.logging import get_logger
from levyrange.utils.numerics import EPS

logger = get_logger(__name__)

ScalarFn = Callable[[float], float]

FAMILY_TAGS = ("drift", "stable", "compound-poisson", "composite-sum", "numeric", "zero")


@dataclass(frozen=True)
class LaplaceExponent:
    """
    Evaluatable psi with first and second derivatives.

    Missing derivatives fall back to central differences with steps u*eps^(1/3) (first
    derivative, and second derivative from an analytic first one) or u*eps^(1/4).
    """

    fn: ScalarFn
    d1: ScalarFn | None = None
    d2: ScalarFn | None = None
    family_tag: str = "numeric"

    def __call__(self, u: float) -> float:
        return float(self.fn(u))

    def deriv1(self, u: float) -> float:
        if self.d1 is not None:
            return float(self.d1(u))
        h = u * EPS ** (1.0 / 3.0)
        return (self.fn(u + h) - self.fn(u - h)) / (2.0 * h)

    def deriv2(self, u: float) -> float:
        if self.d2 is not None:
            return float(self.d2(u))
        if self.d1 is not None:
            h = u * EPS ** (1.0 / 3.0)
            return (self.d1(u + h) - self.d1(u - h)) / (2.0 * h)
        h = u * EPS**0.25
        return (self.fn(u + h) - 2.0 * self.fn(u) + self.fn(u - h)) / (h * h)

    def evaluate(self, grid: np.ndarray) -> np.ndarray:
        return np.fromiter((self(float(u)) for u in grid), dtype=float, count=len(grid))

    def __add__(self, other: LaplaceExponent) -> LaplaceExponent:
        d1 = d2 = None
        if self.d1 is not None and other.d1 is not None:
            d1 = _sum_fn(self.d1, other.d1)
        if self.d2 is not None and other.d2 is not None:
            d2 = _sum_fn(self.d2, other.d2)
        return LaplaceExponent(_sum_fn(self.fn, other.fn), d1, d2, "composite-sum")

    def negated(self) -> ScalarFn:
        """u -> -psi(u), the candidate Bernstein function."""
        return lambda u: -self(u)

    @classmethod
    def zero(cls) -> LaplaceExponent:
        return cls(lambda u: 0.0, lambda u: 0.0, lambda u: 0.0, "zero")

    @classmethod
    def drift(cls, b: float) -> LaplaceExponent:
        return cls(lambda u: -b * u, lambda u: -b, lambda u: 0.0, "drift")

    @classmethod
    def power_sum(
        cls, terms: list[tuple[float, float]], family_tag: str = "numeric"
    ) -> LaplaceExponent:
        """psi(u) = sum_i k_i u^{p_i} with analytic derivatives."""
        frozen = tuple((float(p), float(k)) for p, k in terms)

        def fn(u: float) -> float:
            return math.fsum(k * u**p for p, k in frozen)

        def d1(u: float) -> float:
            return math.fsum(k * p * u ** (p - 1.0) for p, k in frozen)

        def d2(u: float) -> float:
            return math.fsum(k * p * (p - 1.0) * u ** (p - 2.0) for p, k in frozen)

        return cls(fn, d1, d2, family_tag)


def _sum_fn(f: ScalarFn, g: ScalarFn) -> ScalarFn:
    return lambda u: f(u) + g(u)


def _family_tag(measure: LevyMeasureSpec) -> str:
    if isinstance(measure, ZeroMeasure):
        return "drift"
    if isinstance(measure, StableDensity):
        return "stable"
    if isinstance(measure, AtomMeasure):
        return "compound-poisson"
    if isinstance(measure, SumMeasure):
        return "composite-sum"
    return "numeric"


def _require_subordinator(spec: LevyTriplet) -> float:
    if spec.sigma2 != 0:
        raise DomainError("Laplace exponent requested for a process with a Gaussian part")
    drift = spec.fv_drift
    if drift is None or drift < 0 or spec.levy_measure.negative_mass() > 0:
        raise DomainError("Laplace exponent requested for a non-subordinator")
    return drift


def eval_laplace_exponent(spec: LevyTriplet, u: float, method: str = "auto") -> float:
    """
    psi(u) = -b u + int (e^{-ux} - 1) nu(dx) of a subordinator.

    ``method="auto"`` uses closed forms for drift, atoms and stable densities and quadrature
    otherwise; ``method="quadrature"`` forces quadrature for every jump component.

    Raises:
        DomainError: If spec is not a subordinator or u <= 0
        NumericError: If quadrature does not converge
    """
    if not u > 0:
        raise DomainError(f"Laplace exponent needs u > 0, got {u}")
    drift = _require_subordinator(spec)
    measure = spec.levy_measure
    if method == "auto":
        jumps = measure.laplace_integral(u)
    elif method == "quadrature":
        jumps = measure.integrate(lambda x: math.expm1(-u * x), label="laplace_exponent")
    else:
        raise DomainError(f"unknown evaluation method {method!r}")
    return min(0.0, -drift * u + jumps)


def laplace_exponent_of(spec: LevyTriplet) -> LaplaceExponent:
    """Wrap a subordinator triplet as a LaplaceExponent with analytic derivatives."""
    drift = _require_subordinator(spec)
    measure = spec.levy_measure
    return LaplaceExponent(
        fn=lambda u: eval_laplace_exponent(spec, u),
        d1=lambda u: -drift + measure.laplace_integral(u, 1),
        d2=lambda u: measure.laplace_integral(u, 2),
        family_tag=_family_tag(measure),
    )


def subordinator_drift_limit(
    psi: LaplaceExponent | ScalarFn,
    *,
    k_min: int = DRIFT_LIMIT_K_MIN,
    k_max: int = DRIFT_LIMIT_K_MAX,
    tol: float = DRIFT_LIMIT_TOL,
) -> DriftEstimate:
    """
    Estimate -lim psi(u)/u by Aitken extrapolation of s_k = -psi(2^k)/2^k.

    The estimate is flagged unconverged when the last two extrapolants disagree by more than
    tol, or when the limit comes out negative.
    """
    ks = range(k_min, k_max + 1)
    seq = []
    for k in ks:
        u = 2.0**k
        value = -float(psi(u)) / u
        if not math.isfinite(value):
            raise NumericError(f"non-finite exponent at u=2^{k}")
        seq.append(value)

    extrapolants = []
    for s0, s1, s2 in zip(seq, seq[1:], seq[2:], strict=False):
        d1, d2 = s1 - s0, s2 - s1
        denom = d2 - d1
        if abs(denom) <= 64 * EPS * max(1.0, abs(s2)):
            extrapolants.append(s2)
        else:
            extrapolants.append(s2 - d2 * d2 / denom)

    value, previous = extrapolants[-1], extrapolants[-2]
    spread = abs(value - previous)
    converged = spread <= tol * max(1.0, abs(value))
    if -tol <= value < 0:
        value = 0.0
    elif value < 0:
        converged = False

    if not converged:
        logger.info("drift_limit_unconverged", value=value, spread=spread)
    return DriftEstimate(value=value, converged=converged, spread=spread)


def exponential_moment_exponent(spec: LevyTriplet, u: float) -> float:
    """
    kappa(u) = -log E[e^{-u X_1}], or -inf when the exponential moment is infinite.

    Used for the simulation tail bound E[e^{-xi_T}] = e^{-T kappa(1)}.
    """
    if not u > 0:
        raise DomainError(f"exponential moment exponent needs u > 0, got {u}")
    measure = spec.levy_measure

    def integrand(x: float) -> float:
        compensator = u * x if abs(x) <= 1 else 0.0
        return math.expm1(-u * x) + compensator

    try:
        jumps = measure.integrate(integrand, label="exponential_moment")
    except (NumericError, OverflowError):
        return -math.inf
    if not math.isfinite(jumps):
        return -math.inf
    return spec.gamma * u - 0.5 * spec.sigma2 * u * u - jumps
