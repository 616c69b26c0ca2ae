from __future__ import annotations

import math

import pytest

from levyrange.brownian.frobenius import dufresne_laplace
from levyrange.brownian.riccati import (
    BmDriftParams,
    background_exponent_bounds,
    eta_exponent_upper_bound,
    k_from_nuX,
    ode_residual,
    psi_X_from_V,
    riccati_eta_from_X,
)
from levyrange.exceptions import DomainError, ValidationError
from levyrange.levy.exponent import LaplaceExponent
from levyrange.levy.measures import StableDensity
from levyrange.ranges.stable import stable_psi

SQRT_PI = math.sqrt(math.pi)


def test_params_theta_and_normalization() -> None:
    p = BmDriftParams(1.0, 2.0)
    assert p.theta == pytest.approx(0.5)
    q = p.normalized()
    assert q.sigma == 1.0
    assert q.theta == pytest.approx(p.theta)
    assert BmDriftParams.from_theta(0.5).a == pytest.approx(0.5)
    assert BmDriftParams.from_theta(0.5).sigma2 == pytest.approx(2.0)


@pytest.mark.parametrize(("a", "sigma"), [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
def test_params_validation(a, sigma) -> None:
    with pytest.raises(ValidationError):
        BmDriftParams(a, sigma)


def test_integer_theta_is_resonant() -> None:
    assert BmDriftParams(1.0, 1.0).theta_is_integer
    assert not BmDriftParams(0.25, 1.0).theta_is_integer


def test_psi_X_of_half_stable() -> None:
    """u psi_V'(u) = alpha psi_V(u) for a stable exponent."""
    assert psi_X_from_V(stable_psi(0.5, 1.0), 4.0) == pytest.approx(-2.0 * SQRT_PI, rel=1e-12)


def test_psi_X_rejects_non_subordinator_exponent() -> None:
    with pytest.raises(DomainError):
        psi_X_from_V(LaplaceExponent(lambda u: -u * u), 2.0)


def test_riccati_image_of_half_stable_background() -> None:
    """Under a = sigma = 1 the half-stable law is the image of 0.75 sqrt(pi) u^0.5 + (pi/2) u."""
    psi_X = LaplaceExponent.power_sum([(0.5, -SQRT_PI)])
    p = BmDriftParams(1.0, 1.0)
    for u in (0.25, 1.0, 9.0):
        expected = -(0.75 * SQRT_PI * math.sqrt(u) + 0.5 * math.pi * u)
        assert riccati_eta_from_X(psi_X, p, u) == pytest.approx(expected, rel=1e-12)
        assert riccati_eta_from_X(psi_X, p, u) <= eta_exponent_upper_bound(psi_X, p, u)


def test_ode_residual_vanishes_for_dufresne_transform() -> None:
    p = BmDriftParams(1.0, math.sqrt(2.0))
    transform = LaplaceExponent(lambda u: dufresne_laplace(p, u))
    for u in (0.5, 1.0, 2.0):
        assert ode_residual(transform, lambda v: -v, p, u) == pytest.approx(0.0, abs=1e-5)


def test_ode_residual_detects_wrong_eta() -> None:
    p = BmDriftParams(1.0, math.sqrt(2.0))
    transform = LaplaceExponent(lambda u: dufresne_laplace(p, u))
    assert abs(ode_residual(transform, lambda v: -2.0 * v, p, 1.0)) > 1e-2


def test_k_from_stable_background() -> None:
    assert k_from_nuX(StableDensity(0.5, 0.5), 4.0) == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(DomainError):
        k_from_nuX(StableDensity(0.5, 0.5), 0.0)
    with pytest.raises(DomainError):
        k_from_nuX(StableDensity(0.5, 0.5, side="negative"), 1.0)


def test_background_exponent_bounds_bracket_exact_value() -> None:
    lower, upper = background_exponent_bounds(lambda s: s**-0.5, 4.0)
    assert upper == pytest.approx(4.0, rel=1e-8)
    assert lower == pytest.approx(4.0 * (math.e - 1.0) / math.e, rel=1e-8)
    assert lower <= 2.0 * SQRT_PI <= upper
