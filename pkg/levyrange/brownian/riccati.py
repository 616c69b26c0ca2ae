"""
ODE and Riccati relations for xi_t = sigma B_t + a t.

With theta = 2a/sigma^2 the Laplace transform L of V solves

    (sigma^2/2) u^2 L'' + (sigma^2/2 - a) u L' + psi_eta L = 0,

and writing psi_X(u) = u psi_V'(u) for the background subordinator X of V turns it into the
Riccati-type map psi_X -> psi_eta = a psi_X - (sigma^2/2) u psi_X' - (sigma^2/2) psi_X^2.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

from levyrange.constants import RESONANCE_TOL
from levyrange.exceptions import DomainError, ValidationError
from levyrange.levy.exponent import LaplaceExponent
from levyrange.levy.measures import LevyMeasureSpec
from levyrange.levy.triplet import LevyTriplet
from levyrange.utils.numerics import quad_checked

SmoothFn = LaplaceExponent | Callable[[float], float]


@dataclass(frozen=True)
class BmDriftParams:
    """Drift a > 0 and volatility sigma > 0 of xi_t = sigma B_t + a t."""

    a: float
    sigma: float

    def __post_init__(self) -> None:
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValidationError(f"drift a must be positive, got {self.a}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValidationError(f"sigma must be positive, got {self.sigma}")

    @classmethod
    def from_theta(cls, theta: float, sigma2: float = 2.0) -> BmDriftParams:
        """Parameters with 2a/sigma^2 = theta at the given Gaussian variance."""
        if not theta > 0:
            raise ValidationError(f"theta must be positive, got {theta}")
        return cls(a=theta * sigma2 / 2.0, sigma=math.sqrt(sigma2))

    @property
    def sigma2(self) -> float:
        return self.sigma * self.sigma

    @property
    def half_sigma2(self) -> float:
        return 0.5 * self.sigma2

    @property
    def theta(self) -> float:
        return 2.0 * self.a / self.sigma2

    @property
    def theta_is_integer(self) -> bool:
        """Resonant case of the Frobenius expansion."""
        return abs(self.theta - round(self.theta)) < RESONANCE_TOL

    def normalized(self) -> BmDriftParams:
        """Equivalent parameters with sigma = 1 (same range, by Brownian scaling)."""
        return BmDriftParams(a=self.a / self.sigma2, sigma=1.0)

    def to_triplet(self) -> LevyTriplet:
        return LevyTriplet.brownian(self.a, self.sigma)

    def to_dict(self) -> dict[str, float]:
        return {"a": self.a, "sigma": self.sigma, "theta": self.theta}


def _as_exponent(fn: SmoothFn) -> LaplaceExponent:
    return fn if isinstance(fn, LaplaceExponent) else LaplaceExponent(fn)


def _require_positive(u: float) -> None:
    if not u > 0:
        raise DomainError(f"evaluation point must be positive, got {u}")


def ode_residual(lv: SmoothFn, psi_eta: SmoothFn, p: BmDriftParams, u: float) -> float:
    """
    (sigma^2/2) u^2 L''(u) + (sigma^2/2 - a) u L'(u) + psi_eta(u) L(u).

    ``lv`` without analytic derivatives is differentiated by central differences.
    """
    _require_positive(u)
    transform = _as_exponent(lv)
    value = transform(u)
    return (
        p.half_sigma2 * u * u * transform.deriv2(u)
        + (p.half_sigma2 - p.a) * u * transform.deriv1(u)
        + float(psi_eta(u)) * value
    )


def riccati_eta_from_X(psi_X: SmoothFn, p: BmDriftParams, u: float) -> float:
    """psi_eta(u) = a psi_X(u) - (sigma^2/2) u psi_X'(u) - (sigma^2/2) psi_X(u)^2."""
    _require_positive(u)
    exponent = _as_exponent(psi_X)
    value = exponent(u)
    return p.a * value - p.half_sigma2 * u * exponent.deriv1(u) - p.half_sigma2 * value * value


def riccati_exponent(psi_X: LaplaceExponent, p: BmDriftParams) -> LaplaceExponent:
    """The Riccati image of psi_X as a LaplaceExponent (derivatives numeric)."""
    return LaplaceExponent(lambda u: riccati_eta_from_X(psi_X, p, u), family_tag="numeric")


def eta_exponent_upper_bound(psi_X: SmoothFn, p: BmDriftParams, u: float) -> float:
    """
    (a - sigma^2/2) psi_X(u) - (sigma^2/2) psi_X(u)^2.

    Dominates the Riccati image because u psi_X'(u) >= psi_X(u) for Bernstein -psi_X.
    """
    _require_positive(u)
    value = float(psi_X(u))
    return (p.a - p.half_sigma2) * value - p.half_sigma2 * value * value


def psi_X_from_V(psi_V: SmoothFn, u: float, *, tol: float = 1e-9) -> float:
    """
    psi_X(u) = u psi_V'(u) for V = int_0^inf e^{-t} dX_t.

    Raises:
        DomainError: If u psi_V'(u) < psi_V(u), which no subordinator exponent allows
    """
    _require_positive(u)
    exponent = _as_exponent(psi_V)
    psi_x = u * exponent.deriv1(u)
    psi_v = exponent(u)
    if psi_x < psi_v - tol * (1.0 + abs(psi_v)):
        raise DomainError(
            f"u psi_V'(u) = {psi_x:.6g} < psi_V(u) = {psi_v:.6g} at u={u:g}; "
            "psi_V is not a subordinator exponent"
        )
    return psi_x


def k_from_nuX(nuX: LevyMeasureSpec, x: float) -> float:
    """k(x) = nu_X((x, inf)), the k-function of V = int_0^inf e^{-t} dX_t."""
    if not x > 0:
        raise DomainError(f"k needs x > 0, got {x}")
    if nuX.negative_mass() > 0:
        raise DomainError("background measure must live on (0, inf)")
    return nuX.tail_above(x)


def background_exponent_bounds(
    k_function: Callable[[float], float], u: float
) -> tuple[float, float]:
    """
    Bounds (e-1)/e I(u) <= |psi_X(u)| <= I(u) with I(u) = u int_0^{1/u} k(s) ds.

    Raises:
        NumericError: If the integral of k near 0 does not converge
    """
    _require_positive(u)
    upper_limit = 1.0 / u
    integral = quad_checked(
        lambda s: float(k_function(s)),
        0.0,
        upper_limit,
        points=[upper_limit * 10.0**-j for j in range(1, 8)],
        label="k_integral",
    )
    total = u * integral
    return (math.e - 1.0) / math.e * total, total
