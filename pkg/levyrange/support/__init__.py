"""Support classification of exponential functionals."""

from levyrange.support.classifier import (
    ProcessShape,
    positivity_check,
    require_drift_to_infinity,
    shape_of,
    support_eta_is_time,
    support_of_functional,
)

__all__ = [
    "ProcessShape",
    "positivity_check",
    "require_drift_to_infinity",
    "shape_of",
    "support_eta_is_time",
    "support_of_functional",
]
