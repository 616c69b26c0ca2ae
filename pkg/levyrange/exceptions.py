"""Custom exceptions for the levyrange package."""


class LevyRangeError(Exception):
    """Base exception for levyrange errors."""

    pass


class DependencyError(LevyRangeError):
    """Raised when an optional dependency is required but not installed."""

    pass


class ValidationError(LevyRangeError):
    """Raised when configuration or parameter validation fails."""

    pass


class SpecFileError(ValidationError):
    """Raised when a process or law spec file cannot be read or violates its schema."""

    pass


class DomainError(LevyRangeError):
    """Raised when an operation is called outside its mathematical domain."""

    pass


class NumericError(LevyRangeError):
    """Raised when quadrature, extrapolation or evaluation fails numerically."""

    pass


class InconclusiveShapeError(LevyRangeError):
    """Raised when shape predicates of a Lévy measure cannot be certified."""

    pass


class UnsupportedCaseError(LevyRangeError):
    """Raised for cases the implementation deliberately refuses (e.g. resonant Frobenius)."""

    pass
