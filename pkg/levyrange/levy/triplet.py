"""Characteristic triplets (gamma, sigma^2, nu) of one-dimensional Lévy processes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from levyrange.exceptions import DomainError, ValidationError
from levyrange.levy.measures import LevyMeasureSpec, ZeroMeasure


@dataclass(frozen=True)
class LevyTriplet:
    """
    Lévy-Khintchine triplet with the truncation function 1_{|x| <= 1}.

    ``gamma`` is the location parameter; for finite-variation jump parts the drift is
    ``fv_drift = gamma - int_{|x|<=1} x nu(dx)``.
    """

    gamma: float
    sigma2: float = 0.0
    levy_measure: LevyMeasureSpec = field(default_factory=ZeroMeasure)

    def __post_init__(self) -> None:
        if not math.isfinite(self.gamma):
            raise ValidationError(f"gamma must be finite, got {self.gamma}")
        if not (self.sigma2 >= 0 and math.isfinite(self.sigma2)):
            raise ValidationError(f"sigma2 must be finite and >= 0, got {self.sigma2}")
        if not math.isfinite(self.levy_measure.small_second_moment()):
            raise ValidationError("Lévy measure must integrate min(1, x^2)")

    @classmethod
    def drift(cls, b: float) -> LevyTriplet:
        """Deterministic process t -> b t."""
        return cls(gamma=float(b))

    @classmethod
    def brownian(cls, a: float, sigma: float) -> LevyTriplet:
        """sigma B_t + a t."""
        return cls(gamma=float(a), sigma2=float(sigma) ** 2)

    @classmethod
    def from_drift(
        cls, b: float, levy_measure: LevyMeasureSpec | None = None, sigma2: float = 0.0
    ) -> LevyTriplet:
        """Triplet from a finite-variation drift b (jumps need a finite small-jump moment)."""
        measure = levy_measure or ZeroMeasure()
        if not math.isfinite(measure.small_abs_moment()):
            raise DomainError("drift parametrisation needs jumps of finite variation")
        return cls(gamma=float(b) + measure.small_signed_moment(), sigma2=sigma2, levy_measure=measure)

    @classmethod
    def subordinator(cls, b: float, levy_measure: LevyMeasureSpec | None = None) -> LevyTriplet:
        """Subordinator with drift b >= 0 and Lévy measure on (0, inf)."""
        measure = levy_measure or ZeroMeasure()
        if b < 0:
            raise DomainError(f"subordinator drift must be >= 0, got {b}")
        if measure.negative_mass() > 0:
            raise DomainError("subordinator Lévy measure must live on (0, inf)")
        return cls.from_drift(b, measure)

    @property
    def fv_drift(self) -> float | None:
        """Drift b when the jumps have finite variation, else None."""
        if not math.isfinite(self.levy_measure.small_abs_moment()):
            return None
        return self.gamma - self.levy_measure.small_signed_moment()

    @property
    def finite_variation(self) -> bool:
        return self.sigma2 == 0 and self.fv_drift is not None

    @property
    def is_subordinator(self) -> bool:
        drift = self.fv_drift
        return (
            self.sigma2 == 0
            and drift is not None
            and drift >= 0
            and self.levy_measure.negative_mass() == 0
        )

    @property
    def is_deterministic(self) -> bool:
        return self.sigma2 == 0 and self.levy_measure.is_zero()

    def mean(self) -> float | None:
        """E[X_1] when finite, else None."""
        large = self.levy_measure.large_mean()
        if not math.isfinite(large):
            return None
        return self.gamma + large

    def to_dict(self) -> dict[str, Any]:
        return {
            "gamma": self.gamma,
            "sigma2": self.sigma2,
            "fv_drift": self.fv_drift,
            "levy_measure": self.levy_measure.to_dict(),
        }
