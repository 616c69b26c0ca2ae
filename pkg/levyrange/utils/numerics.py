"""Quadrature and finite-difference helpers shared by the analytic modules."""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import comb

from levyrange.exceptions import NumericError
from levyrange.utils.logging import get_logger

logger = get_logger(__name__)

EPS = float(np.finfo(float).eps)


def quad_checked(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    points: Sequence[float] | None = None,
    limit: int = 200,
    epsabs: float = 1e-13,
    epsrel: float = 1e-10,
    label: str = "integral",
) -> float:
    """
    Adaptive Gauss-Kronrod quadrature of ``fn`` over (lo, hi).

    Raises:
        NumericError: when the result is not finite or the reported error estimate is large
            relative to the value, naming the offending subinterval.
    """
    if lo == hi:
        return 0.0
    kwargs: dict[str, object] = {"limit": limit, "epsabs": epsabs, "epsrel": epsrel}
    if points is not None and math.isfinite(lo) and math.isfinite(hi):
        inner = sorted(p for p in points if lo < p < hi)
        if inner:
            kwargs["points"] = inner

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(fn, lo, hi, **kwargs)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise NumericError(f"{label}: quadrature failed on ({lo:g}, {hi:g}): {exc}") from exc

    if not math.isfinite(value):
        raise NumericError(f"{label}: non-finite quadrature result on ({lo:g}, {hi:g})")
    if caught:
        tolerance = max(1e-8 * abs(value), 1e-10)
        if abserr > tolerance:
            raise NumericError(
                f"{label}: quadrature did not converge on ({lo:g}, {hi:g}) "
                f"(value={value:.6g}, error estimate={abserr:.3g})"
            )
        logger.info("quadrature_warning", label=label, lo=lo, hi=hi, abserr=abserr)
    return float(value)


def decade_points(lo: float, hi: float) -> list[float]:
    """Powers of ten strictly inside (lo, hi), used as quadrature breakpoints."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo <= 0:
        return []
    first = math.ceil(math.log10(lo))
    last = math.floor(math.log10(hi))
    return [10.0**k for k in range(first, last + 1) if lo < 10.0**k < hi]


def fd_step(u: np.ndarray | float, order: int) -> np.ndarray | float:
    """Order-adaptive step h_n(u) = u * eps**(1/(n+2))."""
    return np.asarray(u, dtype=float) * EPS ** (1.0 / (order + 2))


def central_difference(
    fn: Callable[[float], float], u: float, order: int, h: float
) -> tuple[float, float]:
    """
    Central finite difference of the given order at u with step h.

    Returns the estimate and max |fn| over the stencil (for roundoff bounds).
    """
    if order == 0:
        value = float(fn(u))
        return value, abs(value)
    total = 0.0
    biggest = 0.0
    for k in range(order + 1):
        x = u + (order / 2.0 - k) * h
        fx = float(fn(x))
        if not math.isfinite(fx):
            raise NumericError(f"non-finite evaluation at u={x:.6g}")
        biggest = max(biggest, abs(fx))
        total += (-1) ** k * comb(order, k, exact=True) * fx
    return total / h**order, biggest
