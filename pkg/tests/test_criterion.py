from __future__ import annotations

import math

import pytest

from levyrange.brownian.riccati import BmDriftParams, ode_residual
from levyrange.exceptions import DomainError
from levyrange.levy.exponent import LaplaceExponent
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import Decision
from levyrange.ranges.criterion import (
    brownian_params,
    check_in_range,
    decide_membership,
    eta_drift_limit,
    g_mu,
    growth_necessary_check,
    prescreen,
)
from levyrange.ranges.laws import PositiveLawSpec

XI_DRIFT = LevyTriplet.drift(2.0)
XI_BM = LevyTriplet.brownian(1.0, 1.0)


def test_g_mu_point_mass_under_deterministic_drift() -> None:
    """xi = 2t and mu = delta_1.5 give g_mu(u) = -3u."""
    mu = PositiveLawSpec.point_mass(1.5)
    for u in (0.01, 1.0, 50.0):
        assert g_mu(mu, XI_DRIFT, u) == pytest.approx(-3.0 * u, rel=1e-12)


def test_g_mu_inverse_gamma_under_dufresne_brownian_is_time() -> None:
    """1/Gamma_1 is the functional of eta = t under xi = sqrt(2) B + t."""
    mu = PositiveLawSpec.inverse_gamma(1.0)
    xi = LevyTriplet.brownian(1.0, math.sqrt(2.0))
    for u in (0.1, 1.0, 10.0):
        assert g_mu(mu, xi, u) == pytest.approx(-u, rel=1e-6)


def test_g_mu_needs_positive_argument() -> None:
    with pytest.raises(DomainError):
        g_mu(PositiveLawSpec.point_mass(1.0), XI_DRIFT, 0.0)


def test_point_mass_accepted_under_deterministic_drift() -> None:
    verdict = check_in_range(PositiveLawSpec.point_mass(1.5), XI_DRIFT)
    assert verdict.decision is Decision.ACCEPT
    assert verdict.method == "general"
    assert verdict.eta_witness is not None
    assert verdict.eta_witness.drift.value == pytest.approx(3.0, rel=1e-6)


def test_stable_law_accepted_under_deterministic_drift() -> None:
    verdict = check_in_range(PositiveLawSpec.stable(0.5, 1.0), XI_DRIFT)
    assert verdict.decision is Decision.ACCEPT
    assert verdict.eta_witness.drift.value == pytest.approx(0.0, abs=1e-6)


def test_inverse_gamma_not_rejected_under_dufresne_brownian() -> None:
    mu = PositiveLawSpec.inverse_gamma(1.0)
    xi = LevyTriplet.brownian(1.0, math.sqrt(2.0))
    verdict = check_in_range(mu, xi)
    assert verdict.decision is not Decision.REJECT
    if verdict.accepted:
        assert verdict.eta_witness.drift.value == pytest.approx(1.0, rel=1e-3)


def test_point_mass_rejected_under_brownian_by_prescreen() -> None:
    """Laws with positive drift are outside the range of a spectrally negative xi."""
    verdict = check_in_range(PositiveLawSpec.point_mass(1.0), XI_BM)
    assert verdict.decision is Decision.REJECT
    assert verdict.details["stage"] == "prescreen"
    assert "drift" in verdict.certificate


def test_compound_poisson_law_rejected_under_any_xi() -> None:
    mu = PositiveLawSpec.compound_poisson(0.0, [(1.0, 2.0)])
    for xi in (XI_DRIFT, XI_BM):
        verdict = check_in_range(mu, xi)
        assert verdict.decision is Decision.REJECT
        assert "compound Poisson" in verdict.certificate


def test_prescreen_passes_stable_law_under_brownian() -> None:
    assert prescreen(PositiveLawSpec.stable(0.5, 1.0), XI_BM) is None


def test_check_in_range_requires_drift_to_infinity() -> None:
    with pytest.raises(DomainError):
        check_in_range(PositiveLawSpec.point_mass(1.0), LevyTriplet.drift(-1.0))


@pytest.mark.parametrize(
    ("alpha", "decision", "limsup"),
    [
        (0.3, Decision.ACCEPT, 0.0),
        (0.5, Decision.ACCEPT, 2.0),
    ],
)
def test_growth_condition_bounded(alpha, decision, limsup) -> None:
    report = growth_necessary_check(PositiveLawSpec.stable(alpha, 1.0), BmDriftParams(1.0, 1.0))
    assert report.decision is decision
    assert report.limsup_estimate == pytest.approx(limsup, abs=1e-3)
    assert report.eta_drift_positive is (limsup > 0)


def test_growth_condition_rejects_fast_growth() -> None:
    """k(x) = x^(-0.7) makes x^(-1/2) int_0^x k diverge."""
    report = growth_necessary_check(PositiveLawSpec.stable(0.7, 1.0), BmDriftParams(1.0, 1.0))
    assert report.decision is Decision.REJECT
    assert math.isinf(report.limsup_estimate)


def test_growth_condition_rejects_positive_drift() -> None:
    report = growth_necessary_check(PositiveLawSpec.stable(0.5, 1.0, drift=1.0), BmDriftParams(1.0, 1.0))
    assert report.decision is Decision.REJECT


def test_growth_condition_needs_k_function() -> None:
    with pytest.raises(DomainError):
        growth_necessary_check(PositiveLawSpec.inverse_gamma(1.0), BmDriftParams(1.0, 1.0))


def test_eta_drift_limit_half_stable() -> None:
    estimate = eta_drift_limit(PositiveLawSpec.stable(0.5, 1.0), BmDriftParams(1.0, 1.0))
    assert estimate.converged
    assert estimate.value == pytest.approx(math.pi / 2, rel=1e-8)


def test_brownian_params_detects_bm_with_drift() -> None:
    assert brownian_params(XI_BM) == BmDriftParams(1.0, 1.0)
    assert brownian_params(XI_DRIFT) is None


def test_decide_membership_auto_uses_stable_decision() -> None:
    verdict = decide_membership(PositiveLawSpec.stable(0.5, 1.0), XI_BM)
    assert verdict.method == "stable"
    assert verdict.decision is Decision.ACCEPT


def test_decide_membership_auto_falls_back_to_general() -> None:
    verdict = decide_membership(PositiveLawSpec.point_mass(1.5), XI_DRIFT)
    assert verdict.method == "general"
    assert verdict.decision is Decision.ACCEPT


def test_decide_membership_growth_pass_is_inconclusive() -> None:
    verdict = decide_membership(PositiveLawSpec.stable(0.5, 1.0), XI_BM, method="growth")
    assert verdict.decision is Decision.INCONCLUSIVE
    assert verdict.method == "growth"
    assert verdict.details["growth"]["decision"] == "accept"


def test_decide_membership_growth_failure_rejects() -> None:
    verdict = decide_membership(PositiveLawSpec.stable(0.7, 1.0), XI_BM, method="growth")
    assert verdict.decision is Decision.REJECT


def test_decide_membership_unknown_method() -> None:
    with pytest.raises(DomainError, match="unknown method"):
        decide_membership(PositiveLawSpec.stable(0.5, 1.0), XI_BM, method="magic")


def test_decide_membership_brownian_only_methods() -> None:
    with pytest.raises(DomainError):
        decide_membership(PositiveLawSpec.stable(0.5, 1.0), XI_DRIFT, method="stable")


def test_decide_membership_stable_method_needs_stable_law() -> None:
    with pytest.raises(DomainError):
        decide_membership(PositiveLawSpec.point_mass(1.0), XI_BM, method="stable")


def test_non_stable_laws_carry_no_stable_spec() -> None:
    assert PositiveLawSpec.point_mass(1.0).stable_spec is None
    assert PositiveLawSpec.inverse_gamma(1.0).stable_spec is None
    assert PositiveLawSpec.stable(0.5, 1.0).stable_spec is not None


def test_decide_membership_auto_routes_delta_zero_to_finite_k() -> None:
    verdict = decide_membership(PositiveLawSpec.point_mass(0.0), XI_BM)
    assert verdict.method == "finite-k"
    assert verdict.decision is Decision.ACCEPT


def test_decide_membership_auto_rejects_positive_point_mass_under_brownian() -> None:
    verdict = decide_membership(PositiveLawSpec.point_mass(1.0), XI_BM)
    assert verdict.method == "finite-k"
    assert verdict.decision is Decision.REJECT


def test_decide_membership_auto_matches_explicit_finite_k() -> None:
    """A background law with an exponential density takes the G-function route by default."""
    from levyrange.config import NumericsConfig
    from levyrange.levy.measures import ExpPolyDensity

    density = ExpPolyDensity(
        density_fn=lambda x: math.exp(-x), derivative_fn=lambda x: -math.exp(-x), label="exp"
    )
    mu = PositiveLawSpec.from_background(density)
    coarse = NumericsConfig(g_grid_lo=1e-3, g_grid_hi=1e3, g_grid_points=60)

    auto = decide_membership(mu, XI_BM, numerics=coarse)
    explicit = decide_membership(mu, XI_BM, method="finite-k", numerics=coarse)
    assert auto.method == explicit.method == "finite-k"
    assert auto.decision is explicit.decision


def test_decide_membership_auto_uses_general_for_inverse_gamma() -> None:
    verdict = decide_membership(PositiveLawSpec.inverse_gamma(1.0), LevyTriplet.brownian(1.0, math.sqrt(2.0)))
    assert verdict.method == "general"
    assert verdict.decision is not Decision.REJECT


def test_general_witness_uses_closed_form_stable_drift() -> None:
    verdict = check_in_range(PositiveLawSpec.stable(0.4, 1.0), XI_BM)
    assert verdict.decision is Decision.ACCEPT
    assert verdict.eta_witness is not None
    assert verdict.eta_witness.drift.value == 0.0
    assert verdict.eta_witness.drift.converged
    assert verdict.details["eta_drift"]["spread"] == 0.0


def _laplace_transform(mu: PositiveLawSpec) -> LaplaceExponent:
    psi = mu.psi_V

    def d1(u: float) -> float:
        return psi.deriv1(u) * math.exp(psi(u))

    def d2(u: float) -> float:
        return (psi.deriv2(u) + psi.deriv1(u) ** 2) * math.exp(psi(u))

    return LaplaceExponent(lambda u: math.exp(psi(u)), d1, d2)


@pytest.mark.parametrize(
    ("mu", "a", "sigma"),
    [
        (PositiveLawSpec.stable(0.4, 1.0), 1.0, 1.0),
        (PositiveLawSpec.stable(0.25, 2.0), 0.5, 1.5),
        (PositiveLawSpec.stable(0.3, 0.5), 1.0, 1.0),
    ],
)
def test_accepted_witness_solves_the_laplace_ode(mu, a, sigma) -> None:
    p = BmDriftParams(a, sigma)
    verdict = check_in_range(mu, p.to_triplet())
    assert verdict.decision is Decision.ACCEPT
    transform = _laplace_transform(mu)
    for u in (0.1, 0.5, 1.0, 2.0, 5.0):
        residual = ode_residual(transform, verdict.eta_witness.exponent, p, u)
        assert residual == pytest.approx(0.0, abs=1e-6)
