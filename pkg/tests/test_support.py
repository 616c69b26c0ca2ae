from __future__ import annotations

import math

import pytest

from levyrange.exceptions import DomainError
from levyrange.levy.measures import AtomMeasure, StableDensity
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import SupportKind, SupportResult
from levyrange.support.classifier import (
    ProcessShape,
    positivity_check,
    shape_of,
    support_eta_is_time,
    support_of_functional,
)

TIME = LevyTriplet.drift(1.0)
XI_DRIFT = LevyTriplet.drift(2.0)
XI_SUBORDINATOR = LevyTriplet.subordinator(1.0, AtomMeasure(((1.0, 1.0),)))
XI_DOWN_JUMPS = LevyTriplet.from_drift(2.0, AtomMeasure(((-1.0, 0.5),)))
XI_BROWNIAN = LevyTriplet.brownian(1.0, 1.0)


def _upward(a):
    return LevyTriplet.from_drift(a, AtomMeasure(((1.0, 1.0),)))


def _downward(a):
    return LevyTriplet.from_drift(a, AtomMeasure(((-1.0, 1.0),)))


def test_shape_of_subordinator_with_atoms() -> None:
    shape = shape_of(XI_SUBORDINATOR)
    assert shape.is_subordinator
    assert shape.finite_variation
    assert shape.fv_drift == pytest.approx(1.0)
    assert shape.nu_pos_mass and not shape.nu_neg_mass
    assert not shape.is_deterministic_drift


def test_shape_of_brownian_is_infinite_variation() -> None:
    shape = shape_of(XI_BROWNIAN)
    assert shape.infinite_variation
    assert shape.fv_drift is None
    assert not shape.is_subordinator


def test_shape_of_stable_above_one_is_infinite_variation() -> None:
    shape = shape_of(LevyTriplet(gamma=0.0, levy_measure=StableDensity(1.5, 1.0)))
    assert shape.infinite_variation


def test_process_shape_rejects_inconsistent_flags() -> None:
    with pytest.raises(ValueError):
        ProcessShape(
            is_deterministic_drift=False,
            is_subordinator=False,
            finite_variation=True,
            fv_drift=1.0,
            nu_pos_mass=False,
            nu_neg_mass=False,
            infinite_variation=True,
        )


@pytest.mark.parametrize(
    ("xi", "kind", "lower", "upper"),
    [
        (XI_DRIFT, SupportKind.POINT, 0.5, 0.5),
        (XI_SUBORDINATOR, SupportKind.CLOSED_BOUNDED_INTERVAL, 0.0, 1.0),
        (XI_DOWN_JUMPS, SupportKind.RIGHT_HALF_LINE, 0.5, math.inf),
        (XI_BROWNIAN, SupportKind.RIGHT_HALF_LINE, 0.0, math.inf),
    ],
)
def test_support_when_eta_is_time(xi, kind, lower, upper) -> None:
    result = support_eta_is_time(xi)
    assert result.kind is kind
    assert result.lower == pytest.approx(lower)
    assert result.upper == pytest.approx(upper)


def test_deterministic_drift_support_describes_as_point() -> None:
    assert support_eta_is_time(XI_DRIFT).describe() == "{0.5}"


def test_support_requires_drift_to_infinity() -> None:
    with pytest.raises(DomainError):
        support_eta_is_time(LevyTriplet.drift(-1.0))


def test_support_rejects_fv_process_without_upward_movement() -> None:
    with pytest.raises(DomainError):
        support_eta_is_time(LevyTriplet.from_drift(0.0, AtomMeasure(((-1.0, 1.0),))))


@pytest.mark.parametrize(
    ("xi", "eta", "lower", "upper"),
    [
        (XI_DRIFT, XI_BROWNIAN, -math.inf, math.inf),
        (XI_DRIFT, LevyTriplet.from_drift(0.0, AtomMeasure(((1.0, 1.0), (-1.0, 1.0)))), -math.inf, math.inf),
        (XI_DRIFT, _upward(1.0), 0.5, math.inf),
        (XI_BROWNIAN, _upward(1.0), 0.0, math.inf),
        (XI_SUBORDINATOR, _upward(-1.0), -1.0, math.inf),
        (XI_BROWNIAN, _upward(-1.0), -math.inf, math.inf),
        (XI_DRIFT, _downward(1.0), -math.inf, 0.5),
        (XI_BROWNIAN, _downward(1.0), -math.inf, math.inf),
        (XI_DRIFT, _downward(-1.0), -math.inf, -0.5),
        (XI_BROWNIAN, _downward(-1.0), -math.inf, 0.0),
    ],
)
def test_support_of_general_functional(xi, eta, lower, upper) -> None:
    result = support_of_functional(xi, eta)
    assert result.lower == pytest.approx(lower)
    assert result.upper == pytest.approx(upper)


def test_deterministic_eta_scales_time_case() -> None:
    result = support_of_functional(XI_DRIFT, LevyTriplet.drift(-2.0))
    assert result == SupportResult.point(-1.0)


def test_zero_eta_gives_point_at_zero() -> None:
    assert support_of_functional(XI_BROWNIAN, LevyTriplet.drift(0.0)) == SupportResult.point(0.0)


def test_positivity_check() -> None:
    assert positivity_check(LevyTriplet.subordinator(0.5, AtomMeasure(((2.0, 1.0),))))
    assert positivity_check(TIME)
    assert not positivity_check(XI_BROWNIAN)
    assert not positivity_check(_downward(1.0))


def test_support_result_describe_and_roundtrip() -> None:
    half_line = SupportResult.right_half_line(0.5)
    assert half_line.describe() == "[0.5, inf)"
    assert SupportResult.left_half_line(0.5).describe() == "(-inf, 0.5]"
    assert SupportResult.full_line().describe() == "(-inf, inf)"
    assert SupportResult.from_dict(half_line.to_dict()) == half_line


def test_support_result_rejects_inconsistent_bounds() -> None:
    with pytest.raises(ValueError):
        SupportResult(SupportKind.POINT, 0.0, 1.0)
