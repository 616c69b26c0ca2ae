"""
Numerical Bernstein-function test.

Complete monotonicity cannot be certified from finitely many points, so the test is
three-valued: a sign violation is only reported when it exceeds the finite-difference error
bound at that point, and violations inside the bound make the verdict inconclusive.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np

from levyrange.constants import (
    DEFAULT_GRID_HI,
    DEFAULT_GRID_LO,
    DEFAULT_GRID_POINTS,
    DEFAULT_MAX_ORDER,
    MIN_GRID_DECADES,
)
from levyrange.exceptions import DomainError, NumericError
from levyrange.models import BernsteinVerdict, Decision, Violation
from levyrange.utils.logging import get_logger
from levyrange.utils.numerics import EPS, central_difference, fd_step

logger = get_logger(__name__)

# relative evaluation noise assumed for f (covers composite evaluations, not only eps)
DEFAULT_EVAL_NOISE = 1e-13


def default_grid() -> np.ndarray:
    return np.logspace(
        math.log10(DEFAULT_GRID_LO), math.log10(DEFAULT_GRID_HI), DEFAULT_GRID_POINTS
    )


def describe_grid(grid: np.ndarray) -> str:
    return f"log[{grid[0]:.3g}, {grid[-1]:.3g}] x {len(grid)}"


def _validate_grid(grid: np.ndarray) -> None:
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("Bernstein grid must be a 1-d array with at least two points")
    if not (np.all(grid > 0) and np.all(np.diff(grid) > 0)):
        raise DomainError("Bernstein grid must be positive and strictly increasing")
    if math.log10(grid[-1] / grid[0]) < MIN_GRID_DECADES - 1e-9:
        raise DomainError(f"Bernstein grid must span at least {MIN_GRID_DECADES:g} decades")


def is_bernstein(
    f: Callable[[float], float],
    grid: np.ndarray | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
    *,
    noise: float = DEFAULT_EVAL_NOISE,
) -> BernsteinVerdict:
    """
    Test f >= 0 and (-1)^{n-1} f^{(n)} >= 0 for n = 1..max_order on the grid.

    Derivatives are central differences with step h = u * eps^(1/(n+2)). The error bound at
    each point is |D_h - D_{2h}| plus a roundoff term 10 * noise * 2^n * max|f| / h^n. A
    signed value below -2 * bound is a certified violation (reject); a value between -2 * bound
    and -bound is marginal (inconclusive).

    Raises:
        DomainError: If the grid is invalid or max_order < 2
        NumericError: If f is not finite at a test point
    """
    points = default_grid() if grid is None else np.asarray(grid, dtype=float)
    _validate_grid(points)
    if max_order < 2:
        raise DomainError(f"max_order must be at least 2, got {max_order}")
    label = describe_grid(points)

    values = np.empty(points.size)
    for i, u in enumerate(points):
        value = float(f(float(u)))
        if not math.isfinite(value):
            raise NumericError(f"non-finite evaluation f({u:.6g}) = {value}")
        values[i] = value

    marginal = 0
    tol0 = noise * float(np.max(np.abs(values))) + 16 * EPS * np.abs(values)
    for u, value, tol in zip(points, values, tol0, strict=False):
        if value < -2 * tol:
            return _reject(label, Violation(float(u), 0, float(value), float(tol)), 0)
        if value < -tol:
            marginal += 1

    for order in range(1, max_order + 1):
        for u in points:
            h = float(fd_step(float(u), order))
            d_h, big_h = central_difference(f, float(u), order, h)
            d_2h, big_2h = central_difference(f, float(u), order, 2.0 * h)
            roundoff = 10.0 * noise * 2**order * max(big_h, big_2h) / h**order
            bound = abs(d_h - d_2h) + roundoff
            signed = (-1) ** (order - 1) * d_h
            if signed >= -bound:
                continue
            if signed < -2.0 * bound:
                return _reject(label, Violation(float(u), order, float(signed), float(bound)), order)
            marginal += 1

    decision = Decision.INCONCLUSIVE if marginal else Decision.ACCEPT
    logger.info(
        "bernstein_test_completed",
        decision=decision.value,
        order=max_order,
        grid=label,
        marginal_points=marginal,
    )
    return BernsteinVerdict(decision, max_order, label, None, marginal)


def _reject(label: str, violation: Violation, order: int) -> BernsteinVerdict:
    logger.info(
        "bernstein_test_completed",
        decision=Decision.REJECT.value,
        order=order,
        grid=label,
        u=violation.u,
        value=violation.value,
    )
    return BernsteinVerdict(Decision.REJECT, order, label, violation, 0)
