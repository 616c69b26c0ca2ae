"""
Parametric Lévy measures on the real line.

Every variant answers the questions the analytic modules ask of nu: tail masses, the small-jump
moments that decide finite variation, total mass, and integrals against test functions. Closed
forms are used where the family has them; densities fall back to adaptive quadrature split at
|x| = 1.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, ClassVar, Literal

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import PchipInterpolator
from scipy.special import gamma as gamma_fn

from levyrange.exceptions import (
    DomainError,
    InconclusiveShapeError,
    UnsupportedCaseError,
    ValidationError,
)
from levyrange.utils.numerics import decade_points, quad_checked

Side = Literal["positive", "negative"]
TestFunction = Callable[[float], float]
Sampler = Callable[[np.random.Generator, int], np.ndarray]

_INVERSE_CDF_POINTS = 4000
_TAIL_CUTOFF = 1e-12


@dataclass(frozen=True)
class TruncatedJumps:
    """
    Jump part split at a cutoff eps: large jumps form a compound Poisson stream with the given
    rate and sampler, small jumps are replaced by their mean per unit time.
    """

    rate: float
    small_mean: float
    small_second_moment: float
    sampler: Sampler = field(repr=False, compare=False)

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if n == 0:
            return np.empty(0)
        return np.asarray(self.sampler(rng, n), dtype=float)


def _no_jumps(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.zeros(n)


def _side_sign(side: str) -> float:
    if side not in ("positive", "negative"):
        raise ValidationError(f"side must be 'positive' or 'negative', got {side!r}")
    return 1.0 if side == "positive" else -1.0


class LevyMeasureSpec(ABC):
    """Common interface of all Lévy measure variants."""

    kind: ClassVar[str]

    @abstractmethod
    def integrate(
        self, fn: TestFunction, *, lo: float = 0.0, hi: float = math.inf, label: str = "levy"
    ) -> float:
        """Integral of fn(x) over {lo < |x| <= hi} against nu; fn receives the signed jump."""

    @abstractmethod
    def positive_mass(self) -> float:
        """nu((0, inf)), possibly infinite."""

    @abstractmethod
    def negative_mass(self) -> float:
        """nu((-inf, 0)), possibly infinite."""

    @abstractmethod
    def truncate(self, eps: float) -> TruncatedJumps:
        """Split into large jumps (|x| > eps) and the mean of small jumps."""

    @abstractmethod
    def to_dict(self) -> dict[str, Any]: ...

    def mass_outside(self, r: float) -> float:
        """nu(R minus [-r, r])."""
        if r <= 0:
            raise DomainError(f"mass_outside needs r > 0, got {r}")
        return self.integrate(lambda x: 1.0, lo=r, label="mass_outside")

    def small_second_moment(self) -> float:
        return self.integrate(lambda x: x * x, hi=1.0, label="small_second_moment")

    def small_abs_moment(self) -> float:
        return self.integrate(abs, hi=1.0, label="small_abs_moment")

    def small_signed_moment(self) -> float:
        if not math.isfinite(self.small_abs_moment()):
            raise DomainError("signed small-jump moment is undefined (infinite variation jumps)")
        return self.integrate(lambda x: x, hi=1.0, label="small_signed_moment")

    def total_mass(self) -> float:
        return self.positive_mass() + self.negative_mass()

    def is_finite(self) -> bool:
        return math.isfinite(self.total_mass())

    def is_zero(self) -> bool:
        return self.total_mass() == 0.0

    def tail_above(self, x: float) -> float:
        """nu((x, inf)) for x > 0."""
        if x <= 0:
            raise DomainError(f"tail_above needs x > 0, got {x}")
        return self.integrate(lambda y: 1.0 if y > 0 else 0.0, lo=x, label="tail_above")

    def large_mean(self) -> float:
        """Integral of x over |x| > 1; infinite (signed) when the first moment diverges."""
        return self.integrate(lambda x: x, lo=1.0, label="large_mean")

    def laplace_integral(self, u: float, order: int = 0) -> float:
        """
        d^order/du^order of the integral of (e^{-ux} - 1) against nu, for measures on (0, inf).

        Raises:
            DomainError: If nu charges the negative half-line or u <= 0
        """
        self._require_subordinator_measure(u)
        if order == 0:
            return self.integrate(lambda x: math.expm1(-u * x), label="laplace_exponent")
        if order == 1:
            return self.integrate(lambda x: -x * math.exp(-u * x), label="laplace_exponent_d1")
        if order == 2:
            return self.integrate(lambda x: x * x * math.exp(-u * x), label="laplace_exponent_d2")
        raise DomainError(f"laplace_integral supports orders 0..2, got {order}")

    def _require_subordinator_measure(self, u: float) -> None:
        if u <= 0:
            raise DomainError(f"Laplace exponent needs u > 0, got {u}")
        if self.negative_mass() > 0:
            raise DomainError("measure charges negative jumps; not a subordinator measure")
        if not math.isfinite(self.small_abs_moment()):
            raise DomainError("measure has infinite small-jump variation; not a subordinator")


@dataclass(frozen=True)
class ZeroMeasure(LevyMeasureSpec):
    kind: ClassVar[str] = "zero"

    def integrate(
        self, fn: TestFunction, *, lo: float = 0.0, hi: float = math.inf, label: str = "levy"
    ) -> float:
        return 0.0

    def positive_mass(self) -> float:
        return 0.0

    def negative_mass(self) -> float:
        return 0.0

    def truncate(self, eps: float) -> TruncatedJumps:
        return TruncatedJumps(0.0, 0.0, 0.0, _no_jumps)

    def to_dict(self) -> dict[str, Any]:
        return {"type": self.kind}


@dataclass(frozen=True)
class AtomMeasure(LevyMeasureSpec):
    """Finite sum of point masses; positions non-zero, masses positive."""

    atoms: tuple[tuple[float, float], ...]
    kind: ClassVar[str] = "atoms"

    def __post_init__(self) -> None:
        for position, mass in self.atoms:
            if position == 0 or not math.isfinite(position):
                raise ValidationError(f"atom positions must be finite and non-zero, got {position}")
            if not (mass > 0 and math.isfinite(mass)):
                raise ValidationError(f"atom masses must be positive, got {mass}")

    def integrate(
        self, fn: TestFunction, *, lo: float = 0.0, hi: float = math.inf, label: str = "levy"
    ) -> float:
        return math.fsum(mass * fn(pos) for pos, mass in self.atoms if lo < abs(pos) <= hi)

    def positive_mass(self) -> float:
        return math.fsum(mass for pos, mass in self.atoms if pos > 0)

    def negative_mass(self) -> float:
        return math.fsum(mass for pos, mass in self.atoms if pos < 0)

    def small_abs_moment(self) -> float:
        return self.integrate(abs, hi=1.0)

    def laplace_integral(self, u: float, order: int = 0) -> float:
        self._require_subordinator_measure(u)
        if order == 0:
            return math.fsum(mass * math.expm1(-u * pos) for pos, mass in self.atoms)
        if order == 1:
            return math.fsum(-mass * pos * math.exp(-u * pos) for pos, mass in self.atoms)
        if order == 2:
            return math.fsum(mass * pos * pos * math.exp(-u * pos) for pos, mass in self.atoms)
        raise DomainError(f"laplace_integral supports orders 0..2, got {order}")

    def truncate(self, eps: float) -> TruncatedJumps:
        large = [(pos, mass) for pos, mass in self.atoms if abs(pos) > eps]
        small = [(pos, mass) for pos, mass in self.atoms if abs(pos) <= eps]
        rate = math.fsum(mass for _, mass in large)
        small_mean = math.fsum(pos * mass for pos, mass in small)
        small_second = math.fsum(pos * pos * mass for pos, mass in small)
        if not large:
            return TruncatedJumps(0.0, small_mean, small_second, _no_jumps)

        positions = np.array([pos for pos, _ in large])
        probs = np.array([mass for _, mass in large]) / rate

        def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
            return rng.choice(positions, size=n, p=probs)

        return TruncatedJumps(rate, small_mean, small_second, sampler)

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": self.kind,
            "atoms": [{"position": pos, "mass": mass} for pos, mass in self.atoms],
        }


@dataclass(frozen=True)
class StableDensity(LevyMeasureSpec):
    """One-sided stable density c |x|^{-1-alpha} on the given half-line."""

    alpha: float
    c: float
    side: Side = "positive"
    kind: ClassVar[str] = "stable"

    def __post_init__(self) -> None:
        if not (0 < self.alpha < 2):
            raise ValidationError(f"stable index must lie in (0, 2), got {self.alpha}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValidationError(f"stable scale c must be positive, got {self.c}")
        _side_sign(self.side)

    @property
    def sign(self) -> float:
        return _side_sign(self.side)

    def density(self, x: float) -> float:
        return self.c * x ** (-1.0 - self.alpha)

    def integrate(
        self, fn: TestFunction, *, lo: float = 0.0, hi: float = math.inf, label: str = "levy"
    ) -> float:
        sign = self.sign
        cuts = [lo] + [p for p in (1.0,) if lo < p < hi] + [hi]
        return math.fsum(
            quad_checked(lambda x: fn(sign * x) * self.density(x), left, right, label=label)
            for left, right in zip(cuts[:-1], cuts[1:], strict=False)
        )

    def positive_mass(self) -> float:
        return math.inf if self.side == "positive" else 0.0

    def negative_mass(self) -> float:
        return math.inf if self.side == "negative" else 0.0

    def mass_outside(self, r: float) -> float:
        if r <= 0:
            raise DomainError(f"mass_outside needs r > 0, got {r}")
        return self.c * r ** (-self.alpha) / self.alpha

    def small_second_moment(self) -> float:
        return self.c / (2.0 - self.alpha)

    def small_abs_moment(self) -> float:
        return self.c / (1.0 - self.alpha) if self.alpha < 1 else math.inf

    def small_signed_moment(self) -> float:
        return self.sign * self.small_abs_moment() if self.alpha < 1 else super().small_signed_moment()

    def tail_above(self, x: float) -> float:
        if x <= 0:
            raise DomainError(f"tail_above needs x > 0, got {x}")
        return self.mass_outside(x) if self.side == "positive" else 0.0

    def large_mean(self) -> float:
        if self.alpha <= 1:
            return self.sign * math.inf
        return self.sign * self.c / (self.alpha - 1.0)

    def laplace_integral(self, u: float, order: int = 0) -> float:
        self._require_subordinator_measure(u)
        a, c = self.alpha, self.c
        if order == 0:
            return -c * gamma_fn(1.0 - a) / a * u**a
        if order == 1:
            return -c * gamma_fn(1.0 - a) * u ** (a - 1.0)
        if order == 2:
            return c * gamma_fn(2.0 - a) * u ** (a - 2.0)
        raise DomainError(f"laplace_integral supports orders 0..2, got {order}")

    def truncate(self, eps: float) -> TruncatedJumps:
        if self.alpha >= 1:
            raise UnsupportedCaseError(
                f"small-jump mean is infinite for stable index {self.alpha} >= 1"
            )
        a, c, sign = self.alpha, self.c, self.sign
        rate = c * eps ** (-a) / a
        small_mean = sign * c * eps ** (1.0 - a) / (1.0 - a)
        small_second = c * eps ** (2.0 - a) / (2.0 - a)

        def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
            # Pareto inverse CDF: P(X > x) = (x / eps)^(-alpha)
            uniform = 1.0 - rng.random(n)
            return sign * eps * uniform ** (-1.0 / a)

        return TruncatedJumps(rate, small_mean, small_second, sampler)

    def to_dict(self) -> dict[str, Any]:
        return {"type": self.kind, "alpha": self.alpha, "c": self.c, "side": self.side}


class _DensityMeasure(LevyMeasureSpec):
    """Shared quadrature machinery for one-sided densities of the jump magnitude."""

    side: Side

    @abstractmethod
    def density(self, x: float) -> float: ...

    @abstractmethod
    def support_bounds(self) -> tuple[float, float]: ...

    def density_values(self, xs: np.ndarray) -> np.ndarray:
        return np.fromiter((self.density(float(x)) for x in xs), dtype=float, count=len(xs))

    @property
    def sign(self) -> float:
        return _side_sign(self.side)

    def integrate(
        self, fn: TestFunction, *, lo: float = 0.0, hi: float = math.inf, label: str = "levy"
    ) -> float:
        support_lo, support_hi = self.support_bounds()
        a, b = max(lo, support_lo), min(hi, support_hi)
        if a >= b:
            return 0.0
        sign = self.sign
        cuts = [a] + [p for p in (1.0,) if a < p < b] + [b]
        return math.fsum(
            quad_checked(
                lambda x: fn(sign * x) * self.density(x),
                left,
                right,
                points=decade_points(left, right),
                label=label,
            )
            for left, right in zip(cuts[:-1], cuts[1:], strict=False)
        )

    def positive_mass(self) -> float:
        return self._side_mass() if self.side == "positive" else 0.0

    def negative_mass(self) -> float:
        return self._side_mass() if self.side == "negative" else 0.0

    @abstractmethod
    def _side_mass(self) -> float: ...

    def _effective_upper(self, start: float, rate: float) -> float:
        _, upper = self.support_bounds()
        if math.isfinite(upper):
            return upper
        x = max(1.0, 2.0 * start)
        while x < 1e12 and self.integrate(lambda _y: 1.0, lo=x) > _TAIL_CUTOFF * rate:
            x *= 4.0
        return x

    def truncate(self, eps: float) -> TruncatedJumps:
        if not math.isfinite(self.small_abs_moment()):
            raise UnsupportedCaseError("small-jump mean is infinite for this density")
        support_lo, _ = self.support_bounds()
        sign = self.sign
        small_mean = self.integrate(lambda x: x, hi=eps, label="small_mean")
        small_second = self.integrate(lambda x: x * x, hi=eps, label="small_second_moment")
        start = max(eps, support_lo)
        rate = self.integrate(lambda _x: 1.0, lo=start, label="large_jump_rate")
        if rate <= 0:
            return TruncatedJumps(0.0, small_mean, small_second, _no_jumps)

        upper = self._effective_upper(start, rate)
        grid = np.logspace(math.log10(start), math.log10(upper), _INVERSE_CDF_POINTS)
        weights = grid * self.density_values(grid)
        cdf = cumulative_trapezoid(weights, np.log(grid), initial=0.0)
        if cdf[-1] <= 0:
            return TruncatedJumps(0.0, small_mean, small_second, _no_jumps)
        cdf = cdf / cdf[-1]

        def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
            return sign * np.interp(rng.random(n), cdf, grid)

        return TruncatedJumps(rate, small_mean, small_second, sampler)


@dataclass(frozen=True)
class ExpPolyDensity(_DensityMeasure):
    """
    User density of the jump magnitude on (0, upper] with certified index bounds.

    ``zero_index`` beta bounds the density by C x^{-1-beta} near 0 (beta < 0 means finite mass,
    beta < 1 finite variation); ``tail_index`` tau bounds it by C x^{-1-tau} at infinity, None
    meaning faster than any power.
    """

    density_fn: Callable[[float], float] = field(compare=False)
    side: Side = "positive"
    zero_index: float = -1.0
    tail_index: float | None = None
    upper: float = math.inf
    label: str = "density"
    derivative_fn: Callable[[float], float] | None = field(default=None, compare=False)
    kind: ClassVar[str] = "density"

    def __post_init__(self) -> None:
        _side_sign(self.side)
        if not self.zero_index < 2:
            raise ValidationError(f"zero_index must be < 2 for a Lévy measure, got {self.zero_index}")
        if self.tail_index is not None and not self.tail_index > 0:
            raise ValidationError(f"tail_index must be positive, got {self.tail_index}")
        if not self.upper > 0:
            raise ValidationError(f"upper must be positive, got {self.upper}")

    def density(self, x: float) -> float:
        if x <= 0 or x > self.upper:
            return 0.0
        return float(self.density_fn(x))

    def density_derivative(self, x: float) -> float | None:
        """Analytic derivative inside the support, or None when not supplied."""
        if self.derivative_fn is None:
            return None
        if x <= 0 or x >= self.upper:
            return 0.0
        return float(self.derivative_fn(x))

    def support_bounds(self) -> tuple[float, float]:
        return 0.0, self.upper

    def _side_mass(self) -> float:
        if self.zero_index >= 0:
            return math.inf
        return self.integrate(lambda _x: 1.0, label="total_mass")

    def small_abs_moment(self) -> float:
        if self.zero_index >= 1:
            return math.inf
        return super().small_abs_moment()

    def large_mean(self) -> float:
        if self.upper <= 1:
            return 0.0
        if math.isinf(self.upper) and self.tail_index is not None and self.tail_index <= 1:
            return self.sign * math.inf
        return super().large_mean()

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": self.kind,
            "label": self.label,
            "side": self.side,
            "zero_index": self.zero_index,
            "tail_index": self.tail_index,
            "upper": None if math.isinf(self.upper) else self.upper,
        }


@dataclass(frozen=True)
class TabulatedDensity(_DensityMeasure):
    """
    Density tabulated on a log-spaced grid, interpolated by monotone piecewise cubics in log x.

    The measure lives on [grid[0], grid[-1]]; evaluating outside raises. ``singular_at_zero``
    declares that the true density keeps charging (0, grid[0]) so small-jump moments cannot be
    certified.
    """

    grid: tuple[float, ...]
    values: tuple[float, ...]
    side: Side = "positive"
    singular_at_zero: bool = False
    kind: ClassVar[str] = "tabulated"
    _interp: Any = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        _side_sign(self.side)
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size < 4 or grid.size != values.size:
            raise ValidationError("tabulated density needs matching grid/values with >= 4 points")
        if not (np.all(grid > 0) and np.all(np.diff(grid) > 0)):
            raise ValidationError("tabulated grid must be positive and strictly increasing")
        if not (np.all(np.isfinite(values)) and np.all(values >= 0)):
            raise ValidationError("tabulated density values must be finite and non-negative")
        object.__setattr__(self, "_interp", PchipInterpolator(np.log(grid), values, extrapolate=False))

    def _check_range(self, xs: np.ndarray) -> None:
        lo, hi = self.grid[0], self.grid[-1]
        if np.any(xs < lo * (1 - 1e-12)) or np.any(xs > hi * (1 + 1e-12)):
            raise DomainError(f"tabulated density evaluated outside its grid [{lo:g}, {hi:g}]")

    def density(self, x: float) -> float:
        return float(self.density_values(np.array([x]))[0])

    def density_values(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        self._check_range(xs)
        clipped = np.clip(xs, self.grid[0], self.grid[-1])
        return np.maximum(self._interp(np.log(clipped)), 0.0)

    def support_bounds(self) -> tuple[float, float]:
        return self.grid[0], self.grid[-1]

    def _side_mass(self) -> float:
        if self.singular_at_zero:
            return math.inf
        return self.integrate(lambda _x: 1.0, label="total_mass")

    def small_abs_moment(self) -> float:
        if self.singular_at_zero:
            raise InconclusiveShapeError(
                "tabulated density is singular at 0 without a certified small-jump moment"
            )
        return super().small_abs_moment()

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": self.kind,
            "grid": list(self.grid),
            "values": list(self.values),
            "side": self.side,
            "singular_at_zero": self.singular_at_zero,
        }


@dataclass(frozen=True)
class SumMeasure(LevyMeasureSpec):
    """Sum of component measures (composite processes and multi-term pre-images)."""

    parts: tuple[LevyMeasureSpec, ...]
    kind: ClassVar[str] = "sum"

    def integrate(
        self, fn: TestFunction, *, lo: float = 0.0, hi: float = math.inf, label: str = "levy"
    ) -> float:
        return math.fsum(p.integrate(fn, lo=lo, hi=hi, label=label) for p in self.parts)

    def positive_mass(self) -> float:
        return sum(p.positive_mass() for p in self.parts)

    def negative_mass(self) -> float:
        return sum(p.negative_mass() for p in self.parts)

    def mass_outside(self, r: float) -> float:
        return sum(p.mass_outside(r) for p in self.parts)

    def small_second_moment(self) -> float:
        return sum(p.small_second_moment() for p in self.parts)

    def small_abs_moment(self) -> float:
        return sum(p.small_abs_moment() for p in self.parts)

    def small_signed_moment(self) -> float:
        return math.fsum(p.small_signed_moment() for p in self.parts)

    def tail_above(self, x: float) -> float:
        return sum(p.tail_above(x) for p in self.parts)

    def large_mean(self) -> float:
        return sum(p.large_mean() for p in self.parts)

    def laplace_integral(self, u: float, order: int = 0) -> float:
        return math.fsum(p.laplace_integral(u, order) for p in self.parts)

    def truncate(self, eps: float) -> TruncatedJumps:
        pieces = [p.truncate(eps) for p in self.parts]
        rate = sum(piece.rate for piece in pieces)
        small_mean = math.fsum(piece.small_mean for piece in pieces)
        small_second = math.fsum(piece.small_second_moment for piece in pieces)
        active = [piece for piece in pieces if piece.rate > 0]
        if not active:
            return TruncatedJumps(0.0, small_mean, small_second, _no_jumps)
        probs = np.array([piece.rate for piece in active]) / rate

        def sampler(rng: np.random.Generator, n: int) -> np.ndarray:
            which = rng.choice(len(active), size=n, p=probs)
            out = np.empty(n)
            for idx, piece in enumerate(active):
                mask = which == idx
                count = int(mask.sum())
                if count:
                    out[mask] = piece.draw(rng, count)
            return out

        return TruncatedJumps(rate, small_mean, small_second, sampler)

    def to_dict(self) -> dict[str, Any]:
        return {"type": self.kind, "parts": [p.to_dict() for p in self.parts]}


def combine(*measures: LevyMeasureSpec) -> LevyMeasureSpec:
    """Sum of measures with zero parts dropped and nested sums flattened."""
    flat: list[LevyMeasureSpec] = []
    for measure in measures:
        if isinstance(measure, ZeroMeasure):
            continue
        if isinstance(measure, SumMeasure):
            flat.extend(measure.parts)
        else:
            flat.append(measure)
    if not flat:
        return ZeroMeasure()
    if len(flat) == 1:
        return flat[0]
    return SumMeasure(tuple(flat))
