from __future__ import annotations

import math

import pytest

from levyrange.exceptions import SpecFileError
from levyrange.levy.measures import SumMeasure
from levyrange.specs import (
    dump_process_spec,
    load_law_spec,
    load_process_spec,
    parse_law_spec,
    parse_process_spec,
    power_sum_spec,
    spec_digest,
)


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_bm_drift_process(tmp_path) -> None:
    path = _write(tmp_path, "xi.yaml", "type: bm_drift\na: 1.0\nsigma: 2.0\n")
    triplet = load_process_spec(path).to_triplet()
    assert triplet.gamma == 1.0
    assert triplet.sigma2 == 4.0


def test_load_compound_poisson_process(tmp_path) -> None:
    text = "type: compound_poisson\ndrift: 1.0\njumps:\n  - {position: 0.5, mass: 2.0}\n  - {position: 3.0, mass: 1.0}\n"
    triplet = load_process_spec(_write(tmp_path, "xi.yaml", text)).to_triplet()
    assert triplet.fv_drift == pytest.approx(1.0)
    assert triplet.mean() == pytest.approx(5.0)


def test_composite_process_sums_parts() -> None:
    spec = parse_process_spec(
        {
            "type": "composite",
            "sigma": 1.0,
            "parts": [
                {"type": "drift", "rate": 0.5},
                {"type": "stable_subordinator", "alpha": 0.5, "c": 1.0},
                {"type": "compound_poisson", "jumps": [{"position": -2.0, "mass": 1.0}]},
            ],
        }
    )
    triplet = spec.to_triplet()
    assert triplet.sigma2 == 1.0
    assert isinstance(triplet.levy_measure, SumMeasure)
    assert triplet.levy_measure.negative_mass() == pytest.approx(1.0)


def test_power_sum_spec_round_trips() -> None:
    spec = power_sum_spec(0.0, [(0.4, 0.32), (0.8, 0.19)])
    again = parse_process_spec(dump_process_spec(spec))
    assert again == spec
    assert again.to_triplet().is_subordinator


@pytest.mark.parametrize(
    "data",
    [
        {"type": "drift"},
        {"type": "drift", "rate": 1.0, "extra": 2},
        {"type": "bm_drift", "a": 1.0, "sigma": -1.0},
        {"type": "compound_poisson", "jumps": [{"position": 0.0, "mass": 1.0}]},
        {"type": "stable_subordinator", "alpha": 1.5, "c": 1.0},
        {"type": "levy_flight"},
    ],
)
def test_invalid_process_specs(data) -> None:
    with pytest.raises(SpecFileError, match="invalid process spec"):
        parse_process_spec(data)


def test_load_stable_law(tmp_path) -> None:
    law = load_law_spec(_write(tmp_path, "mu.yaml", "type: stable\nalpha: 0.5\nc: 1.0\n")).to_law()
    assert law.kind == "stable"
    assert law.psi_V(1.0) == pytest.approx(-2.0 * math.sqrt(math.pi))


def test_stable_convolution_law_sorts_components() -> None:
    spec = parse_law_spec(
        {"type": "stable_convolution", "components": [{"alpha": 0.4, "c": 1.0}, {"alpha": 0.2, "c": 1.0}]}
    )
    assert spec.to_convolution().alphas == (0.2, 0.4)
    assert spec.to_law().kind == "stable_convolution"


def test_background_law_with_power_density() -> None:
    law = parse_law_spec({"type": "background", "g": {"family": "power", "exponent": 3.0}}).to_law()
    assert law.kind == "background"
    assert law.k_function(1.0) == pytest.approx(0.125, rel=1e-6)
    assert law.has_finite_background


def test_point_mass_and_inverse_gamma_laws() -> None:
    assert parse_law_spec({"type": "point_mass", "c": 1.5}).to_law().drift_bV == 1.5
    assert parse_law_spec({"type": "inverse_gamma", "theta": 0.5}).to_law().kind == "inverse_gamma"


def test_invalid_law_spec() -> None:
    with pytest.raises(SpecFileError, match="invalid law spec"):
        parse_law_spec({"type": "stable", "alpha": 0.5})


def test_missing_spec_file(tmp_path) -> None:
    with pytest.raises(FileNotFoundError):
        load_process_spec(tmp_path / "missing.yaml")


def test_spec_file_must_be_mapping(tmp_path) -> None:
    with pytest.raises(SpecFileError, match="top-level mapping"):
        load_law_spec(_write(tmp_path, "mu.yaml", "- 1\n- 2\n"))


def test_invalid_yaml(tmp_path) -> None:
    with pytest.raises(SpecFileError, match="Invalid YAML"):
        load_process_spec(_write(tmp_path, "xi.yaml", "type: [drift\n"))


def test_spec_digest_is_stable(tmp_path) -> None:
    path = _write(tmp_path, "xi.yaml", "type: drift\nrate: 1.0\n")
    assert spec_digest(path) == spec_digest(path)
    assert len(spec_digest(path)) == 64
