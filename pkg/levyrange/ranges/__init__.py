"""Range criteria for positive laws under exponential functionals."""

from levyrange.ranges.criterion import (
    check_in_range,
    decide_membership,
    eta_drift_limit,
    g_mu,
    growth_necessary_check,
    prescreen,
)
from levyrange.ranges.finite_k import critical_drift, finite_k_check
from levyrange.ranges.laws import PositiveLawSpec
from levyrange.ranges.stable import (
    PreimagePolynomialForm,
    StableComponent,
    StableConvolutionSpec,
    StableMixingMeasure,
    closure_class_psi,
    dufresne_check,
    mixing_range_check,
    power_sum_measure,
    stable_preimage,
    stable_psi,
    stable_range_check,
)

__all__ = [
    "PositiveLawSpec",
    "PreimagePolynomialForm",
    "StableComponent",
    "StableConvolutionSpec",
    "StableMixingMeasure",
    "check_in_range",
    "closure_class_psi",
    "critical_drift",
    "decide_membership",
    "dufresne_check",
    "eta_drift_limit",
    "finite_k_check",
    "g_mu",
    "growth_necessary_check",
    "mixing_range_check",
    "power_sum_measure",
    "prescreen",
    "stable_preimage",
    "stable_psi",
    "stable_range_check",
]
