"""levyrange - Public API exports."""

from __future__ import annotations

import importlib
from typing import Any

__version__ = "0.1.0"

__all__ = [
    # Core types
    "LevyTriplet",
    "LaplaceExponent",
    "PositiveLawSpec",
    "StableConvolutionSpec",
    "BmDriftParams",
    # Core functions
    "support_of_functional",
    "is_bernstein",
    "decide_membership",
    "check_in_range",
    "stable_range_check",
    "frobenius_solve",
    "simulate_functional",
    "verify_fixed_point",
    # Spec files
    "load_process_spec",
    "load_law_spec",
    # Configuration
    "NumericsConfig",
    "SimConfig",
    # Results
    "Decision",
    "SupportResult",
    "RangeVerdict",
    # Exceptions
    "LevyRangeError",
    "DependencyError",
    "ValidationError",
    "SpecFileError",
    "DomainError",
    "NumericError",
    "InconclusiveShapeError",
    "UnsupportedCaseError",
    # Metadata
    "__version__",
]

_EXPORTS: dict[str, tuple[str, str]] = {
    # Core types
    "LevyTriplet": ("levyrange.levy.triplet", "LevyTriplet"),
    "LaplaceExponent": ("levyrange.levy.exponent", "LaplaceExponent"),
    "PositiveLawSpec": ("levyrange.ranges.laws", "PositiveLawSpec"),
    "StableConvolutionSpec": ("levyrange.ranges.stable", "StableConvolutionSpec"),
    "BmDriftParams": ("levyrange.brownian.riccati", "BmDriftParams"),
    # Core functions
    "support_of_functional": ("levyrange.support.classifier", "support_of_functional"),
    "is_bernstein": ("levyrange.levy.bernstein", "is_bernstein"),
    "decide_membership": ("levyrange.ranges.criterion", "decide_membership"),
    "check_in_range": ("levyrange.ranges.criterion", "check_in_range"),
    "stable_range_check": ("levyrange.ranges.stable", "stable_range_check"),
    "frobenius_solve": ("levyrange.brownian.frobenius", "frobenius_solve"),
    "simulate_functional": ("levyrange.simulation.engine", "simulate_functional"),
    "verify_fixed_point": ("levyrange.simulation.engine", "verify_fixed_point"),
    # Spec files
    "load_process_spec": ("levyrange.specs", "load_process_spec"),
    "load_law_spec": ("levyrange.specs", "load_law_spec"),
    # Configuration
    "NumericsConfig": ("levyrange.config", "NumericsConfig"),
    "SimConfig": ("levyrange.config", "SimConfig"),
    # Results
    "Decision": ("levyrange.models", "Decision"),
    "SupportResult": ("levyrange.models", "SupportResult"),
    "RangeVerdict": ("levyrange.models", "RangeVerdict"),
    # Exceptions
    "LevyRangeError": ("levyrange.exceptions", "LevyRangeError"),
    "DependencyError": ("levyrange.exceptions", "DependencyError"),
    "ValidationError": ("levyrange.exceptions", "ValidationError"),
    "SpecFileError": ("levyrange.exceptions", "SpecFileError"),
    "DomainError": ("levyrange.exceptions", "DomainError"),
    "NumericError": ("levyrange.exceptions", "NumericError"),
    "InconclusiveShapeError": ("levyrange.exceptions", "InconclusiveShapeError"),
    "UnsupportedCaseError": ("levyrange.exceptions", "UnsupportedCaseError"),
}


def __getattr__(name: str) -> Any:
    """
    Lazy export loader to keep `import levyrange` lightweight.
    """

    target = _EXPORTS.get(name)
    if not target:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    module_name, attr_name = target
    module = importlib.import_module(module_name)
    value = getattr(module, attr_name)
    globals()[name] = value
    return value


def __dir__() -> list[str]:
    return sorted(set(list(globals().keys()) + __all__))
