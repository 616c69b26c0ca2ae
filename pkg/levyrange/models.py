"""Result models for the levyrange package."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from levyrange.levy.exponent import LaplaceExponent
    from levyrange.levy.triplet import LevyTriplet


class Decision(str, Enum):
    """Three-valued verdict shared by every membership test."""

    ACCEPT = "accept"
    REJECT = "reject"
    INCONCLUSIVE = "inconclusive"


def _endpoint(value: float) -> float | None:
    return None if math.isinf(value) else float(value)


@dataclass(frozen=True)
class Violation:
    """Grid point where a sign condition fails."""

    u: float
    order: int
    value: float
    bound: float = 0.0

    def to_dict(self) -> dict[str, object]:
        return {"u": self.u, "order": self.order, "value": self.value, "bound": self.bound}


@dataclass(frozen=True)
class BernsteinVerdict:
    """
    Outcome of the numerical Bernstein-function test.

    A reject always carries the violation witness.
    """

    decision: Decision
    max_order_checked: int
    grid: str
    violation: Violation | None = None
    marginal_points: int = 0

    def __post_init__(self) -> None:
        if self.decision is Decision.REJECT and self.violation is None:
            raise ValueError("a rejecting BernsteinVerdict needs a violation witness")

    def to_dict(self) -> dict[str, object]:
        return {
            "decision": self.decision.value,
            "max_order_checked": self.max_order_checked,
            "grid": self.grid,
            "violation": self.violation.to_dict() if self.violation else None,
            "marginal_points": self.marginal_points,
        }


class SupportKind(str, Enum):
    POINT = "point"
    CLOSED_BOUNDED_INTERVAL = "closed_bounded_interval"
    LEFT_HALF_LINE = "left_half_line"
    RIGHT_HALF_LINE = "right_half_line"
    FULL_LINE = "full_line"


@dataclass(frozen=True)
class SupportResult:
    """
    Classified support of L(V); finite endpoints are closed.
    """

    kind: SupportKind
    lower: float
    upper: float

    def __post_init__(self) -> None:
        lo, hi = self.lower, self.upper
        if self.kind is SupportKind.POINT:
            ok = lo == hi and math.isfinite(lo)
        elif self.kind is SupportKind.CLOSED_BOUNDED_INTERVAL:
            ok = math.isfinite(lo) and math.isfinite(hi) and lo < hi
        elif self.kind is SupportKind.LEFT_HALF_LINE:
            ok = lo == -math.inf and math.isfinite(hi)
        elif self.kind is SupportKind.RIGHT_HALF_LINE:
            ok = math.isfinite(lo) and hi == math.inf
        else:
            ok = lo == -math.inf and hi == math.inf
        if not ok:
            raise ValueError(f"inconsistent support {self.kind.value} [{lo}, {hi}]")

    @classmethod
    def point(cls, x: float) -> SupportResult:
        return cls(SupportKind.POINT, float(x), float(x))

    @classmethod
    def interval(cls, lower: float, upper: float) -> SupportResult:
        if lower == upper:
            return cls.point(lower)
        return cls(SupportKind.CLOSED_BOUNDED_INTERVAL, float(lower), float(upper))

    @classmethod
    def right_half_line(cls, lower: float) -> SupportResult:
        return cls(SupportKind.RIGHT_HALF_LINE, float(lower), math.inf)

    @classmethod
    def left_half_line(cls, upper: float) -> SupportResult:
        return cls(SupportKind.LEFT_HALF_LINE, -math.inf, float(upper))

    @classmethod
    def full_line(cls) -> SupportResult:
        return cls(SupportKind.FULL_LINE, -math.inf, math.inf)

    @classmethod
    def from_bounds(cls, lower: float, upper: float) -> SupportResult:
        if lower == -math.inf and upper == math.inf:
            return cls.full_line()
        if lower == -math.inf:
            return cls.left_half_line(upper)
        if upper == math.inf:
            return cls.right_half_line(lower)
        return cls.interval(lower, upper)

    def scaled(self, factor: float) -> SupportResult:
        """Support of factor * V."""
        if factor == 0:
            return SupportResult.point(0.0)
        lo, hi = self.lower * factor, self.upper * factor
        if factor < 0:
            lo, hi = hi, lo
        return SupportResult.from_bounds(lo, hi)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= x <= self.upper + tol

    def to_dict(self) -> dict[str, object]:
        return {"kind": self.kind.value, "lower": _endpoint(self.lower), "upper": _endpoint(self.upper)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SupportResult:
        lower = -math.inf if data["lower"] is None else float(data["lower"])
        upper = math.inf if data["upper"] is None else float(data["upper"])
        return cls(SupportKind(data["kind"]), lower, upper)

    def describe(self) -> str:
        lo, hi = self.lower, self.upper
        if self.kind is SupportKind.POINT:
            return f"{{{lo:g}}}"
        left = "(-inf" if math.isinf(lo) else f"[{lo:g}"
        right = "inf)" if math.isinf(hi) else f"{hi:g}]"
        return f"{left}, {right}"


@dataclass(frozen=True)
class DriftEstimate:
    """Extrapolated drift -lim psi(u)/u with its convergence certificate."""

    value: float
    converged: bool
    spread: float

    def to_dict(self) -> dict[str, object]:
        return {"value": self.value, "converged": self.converged, "spread": self.spread}


@dataclass(frozen=True)
class EtaWitness:
    """
    Pre-image L(eta_1) produced by an accepting range check.

    ``triplet`` is set when the Lévy measure of eta is known in closed or tabulated form;
    otherwise the witness is the numeric exponent together with its drift.
    """

    exponent: LaplaceExponent
    drift: DriftEstimate
    triplet: LevyTriplet | None = None
    tail_table: tuple[tuple[float, float], ...] = ()

    def to_dict(self) -> dict[str, object]:
        return {
            "family": self.exponent.family_tag,
            "drift": self.drift.to_dict(),
            "has_levy_measure": self.triplet is not None,
        }


@dataclass(frozen=True)
class RangeVerdict:
    """
    Membership verdict for mu in the positive range of the map Phi_xi.
    """

    decision: Decision
    certificate: str
    method: str
    eta_witness: EtaWitness | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.decision is Decision.ACCEPT and self.eta_witness is None:
            raise ValueError("an accepting RangeVerdict needs an eta witness")

    @property
    def accepted(self) -> bool:
        return self.decision is Decision.ACCEPT

    def to_dict(self) -> dict[str, object]:
        return {
            "decision": self.decision.value,
            "certificate": self.certificate,
            "method": self.method,
            "eta_witness": self.eta_witness.to_dict() if self.eta_witness else None,
            "details": self.details,
        }


@dataclass(frozen=True)
class GrowthReport:
    """Outcome of the small-x growth condition on k."""

    decision: Decision
    limsup_estimate: float
    eta_drift_positive: bool | None
    certificate: str

    def to_dict(self) -> dict[str, object]:
        return {
            "decision": self.decision.value,
            "limsup_estimate": self.limsup_estimate,
            "eta_drift_positive": self.eta_drift_positive,
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class NestingEntry:
    a: float
    sigma: float
    theta: float
    decision: Decision


@dataclass(frozen=True)
class NestingReport:
    """Acceptance along (a, sigma) pairs ordered by theta = 2a/sigma^2."""

    entries: tuple[NestingEntry, ...]
    violations: tuple[tuple[int, int], ...]

    @property
    def monotone(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, object]:
        return {
            "entries": [
                {"a": e.a, "sigma": e.sigma, "theta": e.theta, "decision": e.decision.value}
                for e in self.entries
            ],
            "violations": [list(v) for v in self.violations],
        }


@dataclass(frozen=True)
class SupportCheck:
    """Empirical samples compared with a classified support."""

    fraction_outside: float
    sample_min: float
    sample_max: float
    max_deviation: float
    claimed: SupportResult

    @property
    def consistent(self) -> bool:
        return self.fraction_outside <= 0.01

    def to_dict(self) -> dict[str, object]:
        return {
            "fraction_outside": self.fraction_outside,
            "sample_min": self.sample_min,
            "sample_max": self.sample_max,
            "max_deviation": self.max_deviation,
            "claimed": self.claimed.to_dict(),
            "consistent": self.consistent,
        }


@dataclass(frozen=True)
class FixedPointReport:
    """Two-sample comparison of V against its GOU image at time t."""

    statistic: float
    p_value: float | None
    passed: bool
    degenerate: bool
    t_check: float

    def to_dict(self) -> dict[str, object]:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "passed": self.passed,
            "degenerate": self.degenerate,
            "t_check": self.t_check,
        }
