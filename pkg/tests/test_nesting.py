from __future__ import annotations

import math

import numpy as np
import pytest

from levyrange.brownian.nesting import nesting_witness, scale_identity_check
from levyrange.brownian.riccati import BmDriftParams
from levyrange.config import NumericsConfig
from levyrange.levy.measures import ExpPolyDensity
from levyrange.models import Decision
from levyrange.ranges.laws import PositiveLawSpec
from levyrange.ranges.stable import StableConvolutionSpec

COARSE = NumericsConfig(g_grid_lo=1e-3, g_grid_hi=1e3, g_grid_points=60)
PAIRS = [(0.05, 1.0), (0.3, 1.5), (0.5, 1.0), (2.0, 2.0), (3.0, 1.0)]
ALPHA_GRID = np.round(np.arange(0.05, 0.96, 0.05), 2)


def _exponential_background(rate: float) -> PositiveLawSpec:
    density = ExpPolyDensity(
        density_fn=lambda x: rate * math.exp(-rate * x),
        derivative_fn=lambda x: -rate * rate * math.exp(-rate * x),
        label=f"exp{rate:g}",
    )
    return PositiveLawSpec.from_background(density)


def _cubic_background(scale: float) -> PositiveLawSpec:
    density = ExpPolyDensity(
        density_fn=lambda x: scale * (1.0 + x) ** -3,
        derivative_fn=lambda x: -3.0 * scale * (1.0 + x) ** -4,
        tail_index=2.0,
        label=f"cubic{scale:g}",
    )
    return PositiveLawSpec.from_background(density)


def _random_stable_laws(seed: int, count: int) -> list[PositiveLawSpec]:
    rng = np.random.default_rng(seed)
    laws = []
    for _ in range(count):
        n_components = int(rng.integers(1, 3))
        alphas = np.sort(rng.choice(ALPHA_GRID, n_components, replace=False))
        components = [(float(alpha), float(rng.uniform(0.2, 3.0))) for alpha in alphas]
        laws.append(PositiveLawSpec.stable_convolution(StableConvolutionSpec.from_components(components)))
    return laws


def test_stable_acceptance_grows_with_theta() -> None:
    report = nesting_witness(PositiveLawSpec.stable(0.4, 1.0), [(1.0, 1.0), (0.15, 1.0), (0.2, 1.0)])
    assert [e.decision for e in report.entries] == [Decision.REJECT, Decision.ACCEPT, Decision.ACCEPT]
    assert [e.theta for e in report.entries] == sorted(e.theta for e in report.entries)
    assert report.monotone


def test_delta_zero_accepted_everywhere() -> None:
    report = nesting_witness(PositiveLawSpec.point_mass(0.0), [(0.1, 1.0), (1.0, 1.0), (2.0, 0.5)])
    assert all(e.decision is Decision.ACCEPT for e in report.entries)
    assert report.monotone


def test_positive_point_mass_rejected_everywhere() -> None:
    report = nesting_witness(PositiveLawSpec.point_mass(1.0), [(0.1, 1.0), (1.0, 1.0)])
    assert all(e.decision is Decision.REJECT for e in report.entries)
    assert report.to_dict()["violations"] == []


def test_random_stable_corpus_is_monotone() -> None:
    """Stable laws and their convolutions never go from accept to reject as theta grows."""
    laws = _random_stable_laws(seed=2024, count=46)
    conclusive = 0
    for mu in laws:
        report = nesting_witness(mu, PAIRS)
        assert report.monotone, mu.params
        conclusive += sum(e.decision is not Decision.INCONCLUSIVE for e in report.entries)
    assert conclusive > 0


@pytest.mark.parametrize(
    "mu",
    [
        _exponential_background(1.0),
        _exponential_background(3.0),
        _cubic_background(1.0),
        _cubic_background(0.5),
    ],
)
def test_finite_k_corpus_is_monotone(mu) -> None:
    report = nesting_witness(mu, PAIRS, numerics=COARSE)
    assert report.monotone
    assert all(e.theta > 0 for e in report.entries)


def test_scale_identity_for_stable_law() -> None:
    original, scaled = scale_identity_check(PositiveLawSpec.stable(0.4, 1.0), BmDriftParams(0.8, 2.0))
    assert scaled.sigma == 1.0
    assert original.decision is scaled.decision is Decision.ACCEPT


@pytest.mark.parametrize(
    ("mu", "p"),
    [
        (_cubic_background(1.0), BmDriftParams(12.0, 2.0)),
        (_exponential_background(1.0), BmDriftParams(2.0, 2.0)),
    ],
)
def test_scale_identity_for_finite_k_laws(mu, p) -> None:
    original, scaled = scale_identity_check(mu, p, numerics=COARSE)
    assert scaled.a == pytest.approx(p.a / p.sigma2)
    assert scaled.theta == pytest.approx(original.theta)
    assert original.decision is scaled.decision
