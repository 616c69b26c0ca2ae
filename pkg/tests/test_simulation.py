from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import exp1
from scipy.special import gamma as gamma_fn

from levyrange.brownian.frobenius import dufresne_laplace
from levyrange.brownian.riccati import BmDriftParams
from levyrange.config import SimConfig
from levyrange.exceptions import DomainError, ValidationError
from levyrange.levy.measures import AtomMeasure, StableDensity
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import Decision, SupportKind, SupportResult
from levyrange.ranges.criterion import decide_membership
from levyrange.ranges.laws import PositiveLawSpec
from levyrange.simulation.engine import (
    SampleSet,
    empirical_laplace,
    gou_marginal,
    simulate_functional,
    support_consistency,
    verify_fixed_point,
    weighted_eta_sum,
)
from levyrange.simulation.paths import PathGenerator, SampledPath, path_rng
from levyrange.support.classifier import support_of_functional

TIME = LevyTriplet.drift(1.0)
DUFRESNE_XI = LevyTriplet.brownian(1.0, math.sqrt(2.0))


def _samples(values):
    return SampleSet(np.asarray(values, dtype=float), 0.0, {"seed": 0}, 30.0, 1e-2)


def test_path_rng_is_reproducible() -> None:
    a = path_rng(7, 0, 3).standard_normal(4)
    b = path_rng(7, 0, 3).standard_normal(4)
    c = path_rng(7, 1, 3).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_deterministic_functional_is_one() -> None:
    samples = simulate_functional(TIME, TIME, SimConfig(n_paths=10, step_dt=1e-2))
    assert samples.horizon == pytest.approx(30.0)
    assert np.allclose(samples.values, 1.0, atol=1e-2)
    assert samples.truncation_bound < 1e-12


def test_samples_do_not_depend_on_thread_count() -> None:
    cfg = SimConfig(n_paths=40, step_dt=1e-2, horizon_T=5.0, seed=11)
    one = simulate_functional(DUFRESNE_XI, TIME, cfg, threads=1)
    four = simulate_functional(DUFRESNE_XI, TIME, cfg, threads=4)
    assert np.array_equal(one.values, four.values)
    assert one.rng_lineage == four.rng_lineage


def test_dufresne_laplace_transform_matches() -> None:
    """V = 1/Gamma_1 under xi = sqrt(2) B + t, eta = t; E e^{-V} = 2 K_1(2)."""
    samples = simulate_functional(DUFRESNE_XI, TIME, SimConfig(n_paths=2000, step_dt=1e-2, seed=3))
    mean, se = empirical_laplace(samples, 1.0)
    expected = dufresne_laplace(BmDriftParams(1.0, math.sqrt(2.0)), 1.0)
    assert expected == pytest.approx(0.2797, abs=1e-4)
    assert abs(mean - expected) <= 3.0 * se + 0.01


def test_half_stable_functional_matches_closed_form() -> None:
    """xi = B + t/4 and eta drift pi/2 give the half-stable law with L(1) = exp(-2 sqrt(pi))."""
    xi = LevyTriplet.brownian(0.25, 1.0)
    eta = LevyTriplet.drift(math.pi / 2)
    samples = simulate_functional(xi, eta, SimConfig(n_paths=2000, step_dt=1e-2, seed=5))
    assert samples.horizon == pytest.approx(80.0)
    mean, se = empirical_laplace(samples, 1.0)
    expected = math.exp(-2.0 * math.sqrt(math.pi))
    assert abs(mean - expected) <= 3.0 * se + 0.005


def test_stable_eta_with_cutoff() -> None:
    """int_0^inf e^{-s} d eta_s for a half-stable eta has exponent 4 sqrt(pi u)."""
    eta = LevyTriplet.subordinator(0.0, StableDensity(0.5, 1.0))
    samples = simulate_functional(TIME, eta, SimConfig(n_paths=1000, step_dt=1e-2, seed=9))
    u = 0.05
    mean, se = empirical_laplace(samples, u)
    assert abs(mean - math.exp(-4.0 * math.sqrt(math.pi * u))) <= 3.0 * se + 0.01


def test_infinite_activity_needs_cutoff() -> None:
    eta = LevyTriplet.subordinator(0.0, StableDensity(0.5, 1.0))
    with pytest.raises(ValidationError):
        simulate_functional(TIME, eta, SimConfig(n_paths=2, step_dt=1e-2, small_jump_cutoff=None))


def test_xi_must_drift_to_infinity() -> None:
    with pytest.raises(DomainError):
        simulate_functional(LevyTriplet.drift(-1.0), TIME, SimConfig(n_paths=2, step_dt=1e-2))


def test_config_validation() -> None:
    with pytest.raises(ValidationError):
        simulate_functional(TIME, TIME, SimConfig(n_paths=0))


def test_empirical_laplace_two_points() -> None:
    mean, se = empirical_laplace(_samples([0.0, math.log(2.0)]), 1.0)
    assert mean == pytest.approx(0.75)
    assert se == pytest.approx(0.25)
    with pytest.raises(DomainError):
        empirical_laplace(_samples([1.0]), 0.0)


def test_sample_set_frame_and_summary() -> None:
    samples = _samples([1.0, 2.0, 3.0])
    frame = samples.to_frame()
    assert list(frame.columns) == ["path", "value"]
    summary = samples.summary()
    assert summary["n_paths"] == 3
    assert summary["mean"] == pytest.approx(2.0)
    assert len(samples) == 3


def test_gou_marginal_of_deterministic_processes() -> None:
    """e^{-1} (v0 + e - 1) for xi = eta = t at t = 1, up to the left-point bias."""
    values = gou_marginal(TIME, TIME, SimConfig(step_dt=1e-3), 1.0, np.array([0.0, 2.0]))
    expected = np.exp(-1.0) * (np.array([0.0, 2.0]) + math.e - 1.0)
    assert np.allclose(values, expected, atol=2e-3)


def test_support_consistency_for_subordinator_xi() -> None:
    xi = LevyTriplet.subordinator(1.0, AtomMeasure(((1.0, 1.0),)))
    samples = simulate_functional(xi, TIME, SimConfig(n_paths=300, step_dt=1e-2, seed=2))
    check = support_consistency(samples, SupportResult.interval(0.0, 1.0))
    assert check.consistent
    assert check.sample_max <= 1.0 + 1e-2


def test_support_consistency_flags_wrong_claim() -> None:
    samples = simulate_functional(LevyTriplet.drift(2.0), TIME, SimConfig(n_paths=5, step_dt=1e-2))
    assert support_consistency(samples, SupportResult.point(0.5)).consistent
    wrong = support_consistency(samples, SupportResult.point(1.0))
    assert wrong.fraction_outside == 1.0
    assert not wrong.consistent


def test_fixed_point_degenerate_case() -> None:
    report = verify_fixed_point(TIME, TIME, SimConfig(n_paths=5, step_dt=1e-2), 1.0)
    assert report.degenerate
    assert report.passed


def test_fixed_point_dufresne_and_negative_control() -> None:
    cfg = SimConfig(n_paths=2000, step_dt=1e-2, seed=1)
    report = verify_fixed_point(DUFRESNE_XI, TIME, cfg, 1.0)
    assert not report.degenerate
    assert report.passed
    control = verify_fixed_point(DUFRESNE_XI, TIME, cfg, 1.0, copy_scale=2.0)
    assert not control.passed


POISSON = LevyTriplet.subordinator(0.0, AtomMeasure(((1.0, 1.0),)))


def _jump_path(times, sizes, n_steps=1, dt=1.0):
    return SampledPath(np.zeros(n_steps), np.asarray(times, float), np.asarray(sizes, float), dt)


def test_eta_jump_sees_earlier_xi_jump_in_same_step() -> None:
    xi_path = _jump_path([0.3], [1.0])
    assert weighted_eta_sum(xi_path, _jump_path([0.6], [1.0])) == pytest.approx(math.exp(-1.0))
    assert weighted_eta_sum(xi_path, _jump_path([0.2], [1.0])) == pytest.approx(1.0)


def test_eta_jump_sees_interpolated_drift() -> None:
    xi_path = SampledPath(np.array([1.0, 1.0]), np.empty(0), np.empty(0), 1.0)
    assert weighted_eta_sum(xi_path, _jump_path([1.25], [2.0], n_steps=2)) == pytest.approx(
        2.0 * math.exp(-1.25)
    )


def test_sampled_jump_times_are_sorted_inside_their_steps() -> None:
    gen = PathGenerator.from_triplet(LevyTriplet.subordinator(0.0, AtomMeasure(((1.0, 5.0),))), None)
    path = gen.sample(path_rng(4, 0, 0), 20, 0.5)
    assert path.jump_times.size > 0
    assert np.all(np.diff(path.jump_times) >= 0)
    assert np.all((path.jump_times >= 0) & (path.jump_times < 10.0))
    assert path.endpoint() == pytest.approx(float(path.jump_sizes.sum()))


def test_poisson_eta_under_time_has_exact_law_on_coarse_grid() -> None:
    """xi = t, eta Poisson(1) with unit jumps: V = sum e^{-T_i}, log E e^{-uV} = -Ein(u)."""
    samples = simulate_functional(TIME, POISSON, SimConfig(n_paths=4000, step_dt=0.5, seed=21))
    values = samples.values
    assert abs(values.mean() - 1.0) <= 4.0 * values.std(ddof=1) / math.sqrt(values.size)
    mean, se = empirical_laplace(samples, 1.0)
    ein = exp1(1.0) + np.euler_gamma
    assert abs(mean - math.exp(-ein)) <= 4.0 * se


def test_compound_poisson_pair_mean_on_coarse_grid() -> None:
    """xi = t + N_t, eta = N'_t: E V = 1 / (2 - e^{-1}), independent of the step."""
    xi = LevyTriplet.subordinator(1.0, AtomMeasure(((1.0, 1.0),)))
    samples = simulate_functional(xi, POISSON, SimConfig(n_paths=4000, step_dt=1.0, seed=22))
    values = samples.values
    expected = 1.0 / (2.0 - math.exp(-1.0))
    assert abs(values.mean() - expected) <= 4.0 * values.std(ddof=1) / math.sqrt(values.size)


def test_gou_marginal_weights_eta_jumps_at_their_times() -> None:
    """xi = t, eta Poisson(1): E[prefix at t=1] = int_0^1 e^{s-1} ds = 1 - e^{-1} for any step."""
    cfg = SimConfig(n_paths=4000, step_dt=1.0, seed=23)
    values = gou_marginal(TIME, POISSON, cfg, 1.0, np.zeros(4000))
    expected = 1.0 - math.exp(-1.0)
    assert abs(values.mean() - expected) <= 4.0 * values.std(ddof=1) / math.sqrt(values.size)


@pytest.mark.parametrize(
    ("xi", "eta", "kind"),
    [
        (LevyTriplet.drift(2.0), TIME, SupportKind.POINT),
        (LevyTriplet.subordinator(1.0, AtomMeasure(((1.0, 1.0),))), TIME, SupportKind.CLOSED_BOUNDED_INTERVAL),
        (DUFRESNE_XI, TIME, SupportKind.RIGHT_HALF_LINE),
        (DUFRESNE_XI, LevyTriplet.drift(-1.0), SupportKind.LEFT_HALF_LINE),
        (TIME, LevyTriplet.brownian(0.0, 1.0), SupportKind.FULL_LINE),
    ],
)
def test_samples_fall_inside_classified_support(xi, eta, kind) -> None:
    claimed = support_of_functional(xi, eta)
    assert claimed.kind is kind
    samples = simulate_functional(xi, eta, SimConfig(n_paths=300, step_dt=1e-2, seed=31))
    assert support_consistency(samples, claimed).consistent


def test_stable_witness_round_trip_under_brownian_xi() -> None:
    """The accepted 0.4-stable law under xi = B + t is reproduced by simulating its witness."""
    xi = LevyTriplet.brownian(1.0, 1.0)
    verdict = decide_membership(PositiveLawSpec.stable(0.4, 1.0), xi)
    assert verdict.decision is Decision.ACCEPT
    eta = verdict.eta_witness.triplet
    assert eta is not None and eta.is_subordinator
    samples = simulate_functional(xi, eta, SimConfig(n_paths=2000, step_dt=1e-2, seed=41))
    scale = gamma_fn(0.6) / 0.4
    for u in (0.5, 1.0, 2.0):
        mean, se = empirical_laplace(samples, u)
        assert abs(mean - math.exp(-scale * u**0.4)) <= 3.0 * se + 0.005


def test_halving_step_stays_inside_noise_band() -> None:
    coarse = simulate_functional(DUFRESNE_XI, TIME, SimConfig(n_paths=2000, step_dt=2e-2, seed=51))
    fine = simulate_functional(DUFRESNE_XI, TIME, SimConfig(n_paths=2000, step_dt=1e-2, seed=52))
    m_coarse, se_coarse = empirical_laplace(coarse, 1.0)
    m_fine, se_fine = empirical_laplace(fine, 1.0)
    assert abs(m_coarse - m_fine) <= 3.0 * math.hypot(se_coarse, se_fine)


def test_truncation_bound_covers_deterministic_tail() -> None:
    xi = LevyTriplet.drift(2.0)
    short = simulate_functional(xi, TIME, SimConfig(n_paths=2, step_dt=1e-2, horizon_T=1.0))
    long = simulate_functional(xi, TIME, SimConfig(n_paths=2, step_dt=1e-2, horizon_T=2.0))
    shift = float(np.max(np.abs(long.values - short.values)))
    assert shift > 0
    assert short.truncation_bound >= shift


def test_truncation_bound_covers_random_tail() -> None:
    xi = LevyTriplet.brownian(2.0, 1.0)
    short = simulate_functional(xi, TIME, SimConfig(n_paths=2000, step_dt=1e-2, horizon_T=2.0, seed=61))
    long = simulate_functional(xi, TIME, SimConfig(n_paths=2000, step_dt=1e-2, horizon_T=4.0, seed=62))
    noise = math.hypot(
        short.values.std(ddof=1) / math.sqrt(len(short)), long.values.std(ddof=1) / math.sqrt(len(long))
    )
    shift = float(long.values.mean() - short.values.mean())
    assert shift <= short.truncation_bound + 3.0 * noise
    assert long.truncation_bound < short.truncation_bound
