"""
Positive infinitely divisible laws mu = L(V) as seen by the range criteria.

A law carries its Laplace exponent psi_V and drift b_V, and optionally the selfdecomposable
description: the k-function (Lévy density x^{-1} k(x)) and the background subordinator X with
V = int_0^inf e^{-t} dX_t, so that k(x) = nu_X((x, inf)) and psi_X(u) = u psi_V'(u).
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.special import gammaln, kve

from levyrange.exceptions import ValidationError
from levyrange.levy.exponent import LaplaceExponent, laplace_exponent_of
from levyrange.levy.measures import AtomMeasure, LevyMeasureSpec, StableDensity, ZeroMeasure, combine
from levyrange.levy.triplet import LevyTriplet
from levyrange.ranges.stable import StableConvolutionSpec
from levyrange.utils.numerics import quad_checked

KFunction = Callable[[float], float]


@dataclass(frozen=True)
class PositiveLawSpec:
    """
    Law on [0, inf) handed to the range criteria.

    ``nu_V_mass`` is the total mass of the Lévy measure of mu when known (0 for point masses,
    finite for compound Poisson laws, inf for the infinite-activity families).
    """

    psi_V: LaplaceExponent
    drift_bV: float = 0.0
    k_function: KFunction | None = None
    nuX: LevyMeasureSpec | None = None
    b_X: float = 0.0
    nu_V_mass: float | None = None
    kind: str = "custom"
    params: dict[str, Any] = field(default_factory=dict)
    stable_spec: StableConvolutionSpec | None = None

    def __post_init__(self) -> None:
        if not (self.drift_bV >= 0 and math.isfinite(self.drift_bV)):
            raise ValidationError(f"drift b_V must be finite and >= 0, got {self.drift_bV}")
        if not (self.b_X >= 0 and math.isfinite(self.b_X)):
            raise ValidationError(f"background drift b_X must be finite and >= 0, got {self.b_X}")
        if self.nuX is not None and self.nuX.negative_mass() > 0:
            raise ValidationError("background measure nu_X must live on (0, inf)")

    @classmethod
    def point_mass(cls, c: float) -> PositiveLawSpec:
        """delta_c: psi_V(u) = -c u, background X_t = c t."""
        if not (c >= 0 and math.isfinite(c)):
            raise ValidationError(f"point mass location must be >= 0, got {c}")
        return cls(
            psi_V=LaplaceExponent.drift(c),
            drift_bV=c,
            k_function=lambda x: 0.0,
            nuX=ZeroMeasure(),
            b_X=c,
            nu_V_mass=0.0,
            kind="point_mass",
            params={"c": c},
        )

    @classmethod
    def stable(cls, alpha: float, c: float, drift: float = 0.0) -> PositiveLawSpec:
        """Positive alpha-stable law with Lévy density c x^{-1-alpha} plus drift."""
        return cls.stable_convolution(StableConvolutionSpec.single(alpha, c, drift))

    @classmethod
    def stable_convolution(cls, spec: StableConvolutionSpec) -> PositiveLawSpec:
        frozen = tuple((comp.alpha, comp.c) for comp in spec.components)

        def k_function(x: float) -> float:
            return math.fsum(c * x ** (-alpha) for alpha, c in frozen)

        background = combine(*(StableDensity(alpha, c * alpha) for alpha, c in frozen))
        return cls(
            psi_V=spec.psi(),
            drift_bV=spec.drift,
            k_function=k_function,
            nuX=background,
            b_X=spec.drift,
            nu_V_mass=math.inf,
            kind="stable_convolution" if len(frozen) > 1 else "stable",
            params=spec.to_dict(),
            stable_spec=spec,
        )

    @classmethod
    def inverse_gamma(cls, theta: float, scale: float = 1.0) -> PositiveLawSpec:
        """
        Law of scale / Gamma_theta, the exponential functional of eta_t = t under Brownian xi.

        psi_V(u) = log(2 (su)^{theta/2} K_theta(2 sqrt(su)) / Gamma(theta)) with analytic first
        and second derivatives through K-ratios.
        """
        if not (theta > 0 and math.isfinite(theta)):
            raise ValidationError(f"theta must be positive, got {theta}")
        if not (scale > 0 and math.isfinite(scale)):
            raise ValidationError(f"scale must be positive, got {scale}")
        return cls(
            psi_V=_inverse_gamma_exponent(theta, scale),
            nu_V_mass=math.inf,
            kind="inverse_gamma",
            params={"theta": theta, "scale": scale},
        )

    @classmethod
    def from_background(cls, nuX: LevyMeasureSpec, b_X: float = 0.0) -> PositiveLawSpec:
        """
        Law of int_0^inf e^{-t} dX_t for the subordinator X with drift b_X and measure nu_X.

        psi_V(u) = int_0^u psi_X(v)/v dv by quadrature; psi_V' = psi_X(u)/u analytically.
        """
        background = LevyTriplet.subordinator(b_X, nuX)
        psi_X = laplace_exponent_of(background)

        def psi_v(u: float) -> float:
            if u <= 0:
                return 0.0
            return quad_checked(
                lambda v: psi_X(v) / v,
                0.0,
                u,
                points=[u * 10.0**-j for j in range(1, 8)],
                label="background_exponent",
            )

        def d1(u: float) -> float:
            return psi_X(u) / u

        def d2(u: float) -> float:
            return (u * psi_X.deriv1(u) - psi_X(u)) / (u * u)

        return cls(
            psi_V=LaplaceExponent(psi_v, d1, d2, "numeric"),
            drift_bV=b_X,
            k_function=nuX.tail_above,
            nuX=nuX,
            b_X=b_X,
            nu_V_mass=0.0 if nuX.is_zero() else math.inf,
            kind="background",
            params={"b_X": b_X, "nuX": nuX.to_dict()},
        )

    @classmethod
    def compound_poisson(
        cls, drift: float, atoms: Sequence[tuple[float, float]]
    ) -> PositiveLawSpec:
        """Drift plus compound Poisson jumps with the given (position, mass) atoms."""
        measure = AtomMeasure(tuple((float(x), float(m)) for x, m in atoms))
        triplet = LevyTriplet.subordinator(drift, measure)
        return cls(
            psi_V=laplace_exponent_of(triplet),
            drift_bV=drift,
            nu_V_mass=measure.total_mass(),
            kind="compound_poisson",
            params={"drift": drift, "atoms": [list(a) for a in measure.atoms]},
        )

    @property
    def has_finite_background(self) -> bool:
        """nu_X(R_+) < inf, i.e. k(0+) < inf."""
        return self.nuX is not None and self.nuX.is_finite()

    def k_is_non_increasing(self, grid: np.ndarray, *, tol: float = 1e-12) -> bool:
        if self.k_function is None:
            return True
        values = np.array([float(self.k_function(float(x))) for x in grid])
        return bool(np.all(np.diff(values) <= tol * (1.0 + np.abs(values[:-1]))))

    def background_consistency(self, grid: np.ndarray) -> dict[str, float]:
        """
        Largest deviations of k(x) from nu_X((x, inf)) and of u psi_V'(u) from psi_X(u).
        """
        if self.nuX is None:
            return {}
        report: dict[str, float] = {}
        if self.k_function is not None:
            report["k_tail"] = max(
                abs(float(self.k_function(float(x))) - self.nuX.tail_above(float(x))) for x in grid
            )
        psi_X = laplace_exponent_of(LevyTriplet.subordinator(self.b_X, self.nuX))
        report["psi_X"] = max(
            abs(float(u) * self.psi_V.deriv1(float(u)) - psi_X(float(u))) for u in grid
        )
        return report

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "drift_bV": self.drift_bV, "params": self.params}


def _inverse_gamma_exponent(theta: float, scale: float) -> LaplaceExponent:
    log_norm = math.log(2.0) - float(gammaln(theta))

    def z_of(u: float) -> float:
        return 2.0 * math.sqrt(scale * u)

    def ratio(z: float) -> float:
        return float(kve(theta - 1.0, z) / kve(theta, z))

    def log_derivative(nu: float, z: float) -> float:
        # K_nu'/K_nu with K_nu' = -(K_{nu-1} + K_{nu+1}) / 2; scaling factors cancel
        return float(-(kve(nu - 1.0, z) + kve(nu + 1.0, z)) / (2.0 * kve(nu, z)))

    def fn(u: float) -> float:
        if u <= 0:
            return 0.0
        z = z_of(u)
        value = log_norm + 0.5 * theta * math.log(scale * u) + math.log(float(kve(theta, z))) - z
        return min(0.0, value)

    def d1(u: float) -> float:
        z = z_of(u)
        return -(2.0 * scale / z) * ratio(z)

    def d2(u: float) -> float:
        z = z_of(u)
        r = ratio(z)
        r_prime = r * (log_derivative(theta - 1.0, z) - log_derivative(theta, z))
        return -(4.0 * scale * scale / (z * z)) * (r_prime - r / z)

    return LaplaceExponent(fn, d1, d2, "numeric")
