"""Lévy triplets, measures, Laplace exponents and the Bernstein tester."""

from levyrange.levy.bernstein import default_grid, is_bernstein
from levyrange.levy.exponent import (
    LaplaceExponent,
    eval_laplace_exponent,
    exponential_moment_exponent,
    laplace_exponent_of,
    subordinator_drift_limit,
)
from levyrange.levy.measures import (
    AtomMeasure,
    ExpPolyDensity,
    LevyMeasureSpec,
    StableDensity,
    SumMeasure,
    TabulatedDensity,
    TruncatedJumps,
    ZeroMeasure,
    combine,
)
from levyrange.levy.triplet import LevyTriplet

__all__ = [
    "AtomMeasure",
    "ExpPolyDensity",
    "LaplaceExponent",
    "LevyMeasureSpec",
    "LevyTriplet",
    "StableDensity",
    "SumMeasure",
    "TabulatedDensity",
    "TruncatedJumps",
    "ZeroMeasure",
    "combine",
    "default_grid",
    "eval_laplace_exponent",
    "exponential_moment_exponent",
    "is_bernstein",
    "laplace_exponent_of",
    "subordinator_drift_limit",
]
