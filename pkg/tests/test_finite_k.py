from __future__ import annotations

import math

import numpy as np
import pytest

from levyrange.brownian.riccati import BmDriftParams
from levyrange.config import NumericsConfig
from levyrange.exceptions import DomainError
from levyrange.levy.measures import ExpPolyDensity
from levyrange.models import Decision
from levyrange.ranges.finite_k import critical_drift, finite_k_check, g_prime, self_convolution
from levyrange.ranges.laws import PositiveLawSpec

EXPONENTIAL = ExpPolyDensity(
    density_fn=lambda x: math.exp(-x), derivative_fn=lambda x: -math.exp(-x), label="exp"
)
CUBIC_TAIL = ExpPolyDensity(
    density_fn=lambda x: (1.0 + x) ** -3,
    derivative_fn=lambda x: -3.0 * (1.0 + x) ** -4,
    tail_index=2.0,
    label="cubic",
)
COARSE = NumericsConfig(g_grid_lo=1e-3, g_grid_hi=1e3, g_grid_points=60)


def test_self_convolution_of_exponential() -> None:
    assert self_convolution(lambda x: math.exp(-x), 2.0) == pytest.approx(2.0 * math.exp(-2.0), rel=1e-8)


def test_g_prime_exponential_density() -> None:
    """For g = e^{-t}, a = sigma = 1: G'(t) = (2.5 - t) e^{-t}."""
    mu = PositiveLawSpec.from_background(EXPONENTIAL)
    p = BmDriftParams(1.0, 1.0)
    for t in (0.5, 2.0, 4.0):
        assert g_prime(mu, p, t) == pytest.approx((2.5 - t) * math.exp(-t), rel=1e-7)


def test_exponential_density_rejected_at_first_violation() -> None:
    verdict = finite_k_check(PositiveLawSpec.from_background(EXPONENTIAL), BmDriftParams(1.0, 1.0))
    assert verdict.decision is Decision.REJECT
    assert verdict.details["first_violation"] == pytest.approx(2.5, abs=1e-6)


def test_compactly_supported_density_rejected() -> None:
    uniform = ExpPolyDensity(density_fn=lambda x: 1.0, upper=1.0, label="uniform")
    verdict = finite_k_check(PositiveLawSpec.from_background(uniform), BmDriftParams(5.0, 1.0))
    assert verdict.decision is Decision.REJECT


def test_compact_power_density_rejected() -> None:
    power = ExpPolyDensity(
        density_fn=lambda x: 2.0 * x, derivative_fn=lambda x: 2.0, upper=1.0, label="power2"
    )
    verdict = finite_k_check(PositiveLawSpec.from_background(power), BmDriftParams(5.0, 1.0))
    assert verdict.decision is Decision.REJECT


def test_background_drift_rejected() -> None:
    mu = PositiveLawSpec.from_background(EXPONENTIAL, b_X=1.0)
    verdict = finite_k_check(mu, BmDriftParams(1.0, 1.0))
    assert verdict.decision is Decision.REJECT
    assert "b_X" in verdict.certificate


def test_delta_zero_accepted() -> None:
    verdict = finite_k_check(PositiveLawSpec.point_mass(0.0), BmDriftParams(1.0, 1.0))
    assert verdict.decision is Decision.ACCEPT


def test_infinite_background_is_domain_error() -> None:
    with pytest.raises(DomainError):
        finite_k_check(PositiveLawSpec.stable(0.5, 1.0), BmDriftParams(1.0, 1.0))


def test_cubic_tail_accepted_for_large_drift() -> None:
    verdict = finite_k_check(PositiveLawSpec.from_background(CUBIC_TAIL), BmDriftParams(3.0, 1.0), COARSE)
    assert verdict.decision is Decision.ACCEPT
    assert verdict.eta_witness is not None
    assert verdict.eta_witness.triplet.is_subordinator


def test_cubic_tail_critical_drift_refines() -> None:
    """The acceptance threshold sits near a = 1 and a finer a-grid never moves it up."""
    mu = PositiveLawSpec.from_background(CUBIC_TAIL)
    coarse = critical_drift(mu, 1.0, np.round(np.arange(0.5, 3.01, 0.1), 10), COARSE)
    fine = critical_drift(mu, 1.0, np.round(np.arange(0.5, 3.01, 0.05), 10), COARSE)
    assert coarse is not None and fine is not None
    assert 1.0 <= fine <= coarse <= fine + 0.1 + 1e-9
    assert coarse <= 1.5
