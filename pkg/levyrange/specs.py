"""
Process and law spec files.

A spec file is a YAML mapping with a ``type`` key. Process specs convert to LevyTriplet, law
specs to PositiveLawSpec. Unknown keys are rejected.
"""

from __future__ import annotations

import hashlib
import math
from collections.abc import Mapping
from pathlib import Path
from typing import Annotated, Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator
from pydantic import ValidationError as PydanticValidationError

from levyrange.exceptions import SpecFileError
from levyrange.levy.measures import (
    AtomMeasure,
    ExpPolyDensity,
    LevyMeasureSpec,
    StableDensity,
    TabulatedDensity,
    combine,
)
from levyrange.levy.triplet import LevyTriplet
from levyrange.ranges.laws import PositiveLawSpec
from levyrange.ranges.stable import StableConvolutionSpec, power_sum_measure


class _SpecModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class Atom(_SpecModel):
    position: float
    mass: float = Field(gt=0)

    @model_validator(mode="after")
    def _non_zero(self) -> Atom:
        if self.position == 0 or not math.isfinite(self.position):
            raise ValueError("atom position must be finite and non-zero")
        return self


class PowerSumTerm(_SpecModel):
    exponent: float = Field(gt=0, lt=1)
    coefficient: float


# Process specs


class DriftProcess(_SpecModel):
    type: Literal["drift"]
    rate: float

    def to_triplet(self) -> LevyTriplet:
        return LevyTriplet.drift(self.rate)


class BmDriftProcess(_SpecModel):
    type: Literal["bm_drift"]
    a: float
    sigma: float = Field(ge=0)

    def to_triplet(self) -> LevyTriplet:
        return LevyTriplet.brownian(self.a, self.sigma)


class CompoundPoissonProcess(_SpecModel):
    type: Literal["compound_poisson"]
    drift: float = 0.0
    jumps: list[Atom] = Field(min_length=1)

    def to_triplet(self) -> LevyTriplet:
        measure = AtomMeasure(tuple((j.position, j.mass) for j in self.jumps))
        return LevyTriplet.from_drift(self.drift, measure)


class StableSubordinatorProcess(_SpecModel):
    type: Literal["stable_subordinator"]
    alpha: float = Field(gt=0, lt=1)
    c: float = Field(gt=0)
    drift: float = Field(default=0.0, ge=0)

    def to_triplet(self) -> LevyTriplet:
        return LevyTriplet.subordinator(self.drift, StableDensity(self.alpha, self.c))


class PowerSumProcess(_SpecModel):
    """Drift plus jumps with density sum_i coefficient_i x^{-1-exponent_i}."""

    type: Literal["power_sum"]
    drift: float = Field(default=0.0, ge=0)
    terms: list[PowerSumTerm] = Field(default_factory=list)

    def to_triplet(self) -> LevyTriplet:
        measure = power_sum_measure([(t.exponent, t.coefficient) for t in self.terms])
        return LevyTriplet.from_drift(self.drift, measure)


LeafProcess = Annotated[
    DriftProcess
    | BmDriftProcess
    | CompoundPoissonProcess
    | StableSubordinatorProcess
    | PowerSumProcess,
    Field(discriminator="type"),
]


class CompositeProcess(_SpecModel):
    """Independent sum of leaf processes plus an extra Gaussian part."""

    type: Literal["composite"]
    sigma: float = Field(default=0.0, ge=0)
    parts: list[LeafProcess] = Field(min_length=1)

    def to_triplet(self) -> LevyTriplet:
        triplets = [part.to_triplet() for part in self.parts]
        return LevyTriplet(
            gamma=math.fsum(t.gamma for t in triplets),
            sigma2=math.fsum(t.sigma2 for t in triplets) + self.sigma**2,
            levy_measure=combine(*(t.levy_measure for t in triplets)),
        )


ProcessSpec = Annotated[
    DriftProcess
    | BmDriftProcess
    | CompoundPoissonProcess
    | StableSubordinatorProcess
    | PowerSumProcess
    | CompositeProcess,
    Field(discriminator="type"),
]


# Background densities g of nu_X


class ExponentialG(_SpecModel):
    """g(t) = weight e^{-rate t}."""

    family: Literal["exponential"]
    rate: float = Field(default=1.0, gt=0)
    weight: float = Field(default=1.0, gt=0)

    def to_measure(self) -> LevyMeasureSpec:
        rate, weight = self.rate, self.weight
        return ExpPolyDensity(
            density_fn=lambda t: weight * math.exp(-rate * t),
            label="exponential",
            derivative_fn=lambda t: -rate * weight * math.exp(-rate * t),
        )


class PowerG(_SpecModel):
    """g(t) = weight (1 + t)^{-exponent}."""

    family: Literal["power"]
    exponent: float = Field(gt=1)
    weight: float = Field(default=1.0, gt=0)

    def to_measure(self) -> LevyMeasureSpec:
        p, weight = self.exponent, self.weight
        return ExpPolyDensity(
            density_fn=lambda t: weight * (1.0 + t) ** (-p),
            tail_index=p - 1.0,
            label="power",
            derivative_fn=lambda t: -p * weight * (1.0 + t) ** (-p - 1.0),
        )


class CompactG(_SpecModel):
    """g(t) = weight (1 - t/upper)^power on (0, upper]; power = 0 is a uniform density."""

    family: Literal["compact"]
    upper: float = Field(gt=0)
    power: float = Field(default=0.0, ge=0)
    weight: float = Field(default=1.0, gt=0)

    def to_measure(self) -> LevyMeasureSpec:
        upper, power, weight = self.upper, self.power, self.weight

        def derivative(t: float) -> float:
            if power == 0:
                return 0.0
            return -weight * power / upper * (1.0 - t / upper) ** (power - 1.0)

        return ExpPolyDensity(
            density_fn=lambda t: weight * (1.0 - t / upper) ** power,
            upper=upper,
            label="compact",
            derivative_fn=derivative,
        )


class TabulatedG(_SpecModel):
    family: Literal["tabulated"]
    t: list[float] = Field(min_length=4)
    values: list[float] = Field(min_length=4)

    def to_measure(self) -> LevyMeasureSpec:
        return TabulatedDensity(tuple(self.t), tuple(self.values))


BackgroundDensity = Annotated[
    ExponentialG | PowerG | CompactG | TabulatedG, Field(discriminator="family")
]


# Law specs


class StableComponentModel(_SpecModel):
    alpha: float = Field(gt=0, lt=1)
    c: float = Field(gt=0)
    b: float = Field(default=0.0, ge=0)


class StableLaw(_SpecModel):
    type: Literal["stable"]
    alpha: float = Field(gt=0, lt=1)
    c: float = Field(gt=0)
    drift: float = Field(default=0.0, ge=0)

    def to_law(self) -> PositiveLawSpec:
        return PositiveLawSpec.stable(self.alpha, self.c, self.drift)


class StableConvolutionLaw(_SpecModel):
    type: Literal["stable_convolution"]
    components: list[StableComponentModel] = Field(min_length=1)

    def to_convolution(self) -> StableConvolutionSpec:
        return StableConvolutionSpec.from_components((c.alpha, c.c, c.b) for c in self.components)

    def to_law(self) -> PositiveLawSpec:
        return PositiveLawSpec.stable_convolution(self.to_convolution())


class PointMassLaw(_SpecModel):
    type: Literal["point_mass"]
    c: float = Field(ge=0)

    def to_law(self) -> PositiveLawSpec:
        return PositiveLawSpec.point_mass(self.c)


class InverseGammaLaw(_SpecModel):
    type: Literal["inverse_gamma"]
    theta: float = Field(gt=0)
    scale: float = Field(default=1.0, gt=0)

    def to_law(self) -> PositiveLawSpec:
        return PositiveLawSpec.inverse_gamma(self.theta, self.scale)


class CompoundPoissonLaw(_SpecModel):
    type: Literal["compound_poisson"]
    drift: float = Field(default=0.0, ge=0)
    atoms: list[Atom] = Field(min_length=1)

    def to_law(self) -> PositiveLawSpec:
        return PositiveLawSpec.compound_poisson(
            self.drift, [(a.position, a.mass) for a in self.atoms]
        )


class BackgroundLaw(_SpecModel):
    """Law of int_0^inf e^{-t} dX_t for X with drift b_X and Lévy density g."""

    type: Literal["background"]
    b_X: float = Field(default=0.0, ge=0)
    g: BackgroundDensity

    def to_law(self) -> PositiveLawSpec:
        return PositiveLawSpec.from_background(self.g.to_measure(), self.b_X)


LawSpec = Annotated[
    StableLaw
    | StableConvolutionLaw
    | PointMassLaw
    | InverseGammaLaw
    | CompoundPoissonLaw
    | BackgroundLaw,
    Field(discriminator="type"),
]

_PROCESS_ADAPTER: TypeAdapter[Any] = TypeAdapter(ProcessSpec)
_LAW_ADAPTER: TypeAdapter[Any] = TypeAdapter(LawSpec)


def _read_mapping(path: str | Path) -> dict[str, Any]:
    spec_path = Path(path)
    if not spec_path.exists():
        raise FileNotFoundError(f"Spec file not found: {spec_path}")
    try:
        with spec_path.open("r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise SpecFileError(f"Invalid YAML in spec file {spec_path}: {exc}") from exc
    except OSError as exc:
        raise SpecFileError(f"Cannot read spec file {spec_path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecFileError(f"Spec file {spec_path} must contain a top-level mapping")
    return data


def _flatten(exc: PydanticValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(x) for x in err.get("loc", ()))
        parts.append(f"{loc}: {err.get('msg', 'invalid value')}" if loc else err.get("msg", ""))
    return "; ".join(parts)


def parse_process_spec(data: Mapping[str, Any]) -> Any:
    """
    Raises:
        SpecFileError: If the mapping does not match a process spec
    """
    try:
        return _PROCESS_ADAPTER.validate_python(dict(data))
    except PydanticValidationError as exc:
        raise SpecFileError(f"invalid process spec: {_flatten(exc)}") from exc


def parse_law_spec(data: Mapping[str, Any]) -> Any:
    """
    Raises:
        SpecFileError: If the mapping does not match a law spec
    """
    try:
        return _LAW_ADAPTER.validate_python(dict(data))
    except PydanticValidationError as exc:
        raise SpecFileError(f"invalid law spec: {_flatten(exc)}") from exc


def load_process_spec(path: str | Path) -> Any:
    """
    Load a process spec file; call ``.to_triplet()`` on the result.

    Raises:
        FileNotFoundError: If the file is missing
        SpecFileError: If the file is not valid YAML or violates the schema
    """
    return parse_process_spec(_read_mapping(path))


def load_law_spec(path: str | Path) -> Any:
    """
    Load a law spec file; call ``.to_law()`` on the result.

    Raises:
        FileNotFoundError: If the file is missing
        SpecFileError: If the file is not valid YAML or violates the schema
    """
    return parse_law_spec(_read_mapping(path))


def dump_process_spec(spec: BaseModel) -> dict[str, Any]:
    """Plain mapping that parses back into an equal spec."""
    return spec.model_dump(mode="json")


def power_sum_spec(drift: float, terms: list[tuple[float, float]]) -> PowerSumProcess:
    """Process spec of drift plus density sum_i E_i x^{-1-gamma_i}."""
    return PowerSumProcess(
        type="power_sum",
        drift=drift,
        terms=[PowerSumTerm(exponent=g, coefficient=e) for g, e in terms],
    )


def spec_digest(path: str | Path) -> str:
    """SHA-256 of the raw file bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
