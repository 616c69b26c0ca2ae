"""
Frobenius solution of the Laplace-transform ODE at its regular singular point u = 0.

Dividing the ODE by sigma^2/2 gives u^2 L'' + (1 - theta) u L' + f~(u) L = 0 with
f~ = (2/sigma^2) psi_eta = sum_{n>=1} f~_n u^n. The indicial roots are 0 and theta, and for
non-integer theta

    L(u) = C1 u^theta sum_n c_n u^n + C2 sum_n d_n u^n,    c_0 = d_0 = 1,
    c_n = -1/(n (n + theta)) sum_{k<n} c_k f~_{n-k},
    d_n = -1/(n (n - theta)) sum_{k<n} d_k f~_{n-k}.

L(0) = 1 forces C2 = 1; C1 is fitted from L(u) -> 0 as u -> inf unless supplied.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
from numpy.polynomial import polynomial as P
from scipy.special import gammaln, kve

from levyrange.brownian.riccati import BmDriftParams
from levyrange.constants import DEFAULT_SERIES_TERMS, SERIES_TAIL_TOL
from levyrange.exceptions import DomainError, NumericError, UnsupportedCaseError
from levyrange.levy.exponent import LaplaceExponent
from levyrange.utils.logging import get_logger

logger = get_logger(__name__)

_FIT_U_CAP = 1e4
_FIT_POINTS = 8


def scaled_coefficients(f_coeffs: Sequence[float], p: BmDriftParams) -> list[float]:
    """f~_n = (2/sigma^2) f_n."""
    factor = 2.0 / p.sigma2
    return [factor * float(f) for f in f_coeffs]


def frobenius_coefficients(
    f_scaled: Sequence[float], theta: float, n_terms: int
) -> tuple[np.ndarray, np.ndarray]:
    """c_0..c_N and d_0..d_N by the exact recursion (f~_n = 0 beyond the given list)."""
    f = [0.0, *f_scaled]
    c = [1.0]
    d = [1.0]
    for n in range(1, n_terms + 1):
        upto = range(max(0, n - len(f) + 1), n)
        c_sum = math.fsum(c[k] * f[n - k] for k in upto)
        d_sum = math.fsum(d[k] * f[n - k] for k in upto)
        c.append(-c_sum / (n * (n + theta)))
        d.append(-d_sum / (n * (n - theta)))
    return np.array(c), np.array(d)


def _last_nonzero(coeffs: np.ndarray) -> tuple[int, float]:
    nonzero = np.nonzero(coeffs[1:])[0]
    if nonzero.size == 0:
        return 0, 0.0
    n = int(nonzero[-1]) + 1
    return n, float(abs(coeffs[n]))


@dataclass(frozen=True)
class FrobeniusSeries:
    """
    Truncated Frobenius solution with its certified radius.

    The radius is the largest u with |c_n u^n| + |d_n u^n| <= SERIES_TAIL_TOL at the last
    representable (non-underflowed) index n of each series.
    """

    theta: float
    f_coeffs: tuple[float, ...]
    c_coeffs: tuple[float, ...]
    d_coeffs: tuple[float, ...]
    C1: float
    truncation_N: int
    radius_estimate: float
    sigma2: float = 2.0
    c1_source: str = "fitted"
    C2: float = 1.0

    def _series(self, u: float) -> tuple[float, float]:
        y1 = u**self.theta * float(P.polyval(u, self.c_coeffs))
        y2 = float(P.polyval(u, self.d_coeffs))
        return y1, y2

    def __call__(self, u: float) -> float:
        if u == 0:
            return self.C2
        y1, y2 = self._series(u)
        return self.C1 * y1 + self.C2 * y2

    def error_bound(self, u: float) -> float:
        n_c, c_last = _last_nonzero(np.asarray(self.c_coeffs))
        n_d, d_last = _last_nonzero(np.asarray(self.d_coeffs))
        return abs(self.C1) * u**self.theta * c_last * u**n_c + d_last * u**n_d

    def derivative(self, u: float, order: int) -> float:
        """First or second derivative of the series at u > 0."""
        c = np.asarray(self.c_coeffs)
        d = np.asarray(self.d_coeffs)
        t = self.theta
        p0, p1, p2 = (float(P.polyval(u, P.polyder(c, k))) for k in range(3))
        if order == 1:
            y1 = t * u ** (t - 1.0) * p0 + u**t * p1
            y2 = float(P.polyval(u, P.polyder(d)))
        elif order == 2:
            y1 = t * (t - 1.0) * u ** (t - 2.0) * p0 + 2.0 * t * u ** (t - 1.0) * p1 + u**t * p2
            y2 = float(P.polyval(u, P.polyder(d, 2)))
        else:
            raise DomainError(f"series derivatives of order {order} are not provided")
        return self.C1 * y1 + self.C2 * y2

    def transform(self) -> LaplaceExponent:
        """The series as a smooth function with analytic derivatives (for ode_residual)."""
        return LaplaceExponent(
            self, lambda u: self.derivative(u, 1), lambda u: self.derivative(u, 2), "numeric"
        )

    def evaluate(self, u_grid: Sequence[float] | np.ndarray) -> pd.DataFrame:
        """
        Table of (u, laplace, error_bound).

        Raises:
            NumericError: If a grid point lies beyond the certified radius
        """
        grid = np.asarray(u_grid, dtype=float)
        if np.any(grid <= 0):
            raise DomainError("series grid must be positive")
        beyond = grid[grid > self.radius_estimate]
        if beyond.size:
            raise NumericError(
                f"u={beyond[0]:.6g} exceeds the certified radius {self.radius_estimate:.6g} "
                f"of the {self.truncation_N}-term series; increase N or reduce u"
            )
        return pd.DataFrame(
            {
                "u": grid,
                "laplace": [self(float(u)) for u in grid],
                "error_bound": [self.error_bound(float(u)) for u in grid],
            }
        )

    def header(self) -> dict[str, object]:
        return {
            "theta": repr(self.theta),
            "C1": repr(self.C1),
            "C2": repr(self.C2),
            "C1_source": self.c1_source,
            "N": self.truncation_N,
            "radius": repr(self.radius_estimate),
        }


def _radius(c: np.ndarray, d: np.ndarray) -> float:
    bounds = []
    for coeffs in (c, d):
        n, last = _last_nonzero(coeffs)
        if n:
            bounds.append(math.exp((math.log(SERIES_TAIL_TOL / 2.0) - math.log(last)) / n))
    return min(bounds) if bounds else math.inf


def _fit_c1(c: np.ndarray, d: np.ndarray, theta: float, radius: float) -> float:
    """Least-squares C1 with C1 y1(U) + y2(U) ~ 0 at the largest certified U."""
    u_max = min(radius, _FIT_U_CAP)
    points = np.geomspace(u_max / 4.0, u_max, _FIT_POINTS)
    y1 = np.array([u**theta * float(P.polyval(u, c)) for u in points])
    y2 = np.array([float(P.polyval(u, d)) for u in points])
    denom = float(np.dot(y1, y1))
    if not (math.isfinite(denom) and denom > 0):
        raise NumericError("C1 fit failed: the first Frobenius solution vanishes at the fit points")
    c1 = -float(np.dot(y1, y2)) / denom
    if not math.isfinite(c1):
        raise NumericError("C1 fit produced a non-finite value")
    return c1


def frobenius_solve(
    f_coeffs: Sequence[float],
    p: BmDriftParams,
    N: int = DEFAULT_SERIES_TERMS,
    u_grid: Sequence[float] | np.ndarray | None = None,
    *,
    c1: float | None = None,
) -> tuple[FrobeniusSeries, pd.DataFrame | None]:
    """
    Build the series for psi_eta(u) = sum_{n>=1} f_n u^n and evaluate it on u_grid.

    Raises:
        UnsupportedCaseError: If theta is (numerically) an integer
        NumericError: If a grid point lies beyond the certified radius
    """
    if p.theta_is_integer:
        raise UnsupportedCaseError(
            f"theta = {p.theta:g} is an integer; the expansion needs logarithmic terms"
        )
    if N < 2:
        raise DomainError(f"N must be at least 2, got {N}")
    f_scaled = scaled_coefficients(f_coeffs, p)
    c, d = frobenius_coefficients(f_scaled, p.theta, N)
    radius = _radius(c, d)

    if c1 is not None:
        c1_value, source = float(c1), "supplied"
    elif not any(f_scaled):
        c1_value, source = 0.0, "trivial"
    else:
        c1_value, source = _fit_c1(c, d, p.theta, radius), "fitted"

    series = FrobeniusSeries(
        theta=p.theta,
        f_coeffs=tuple(float(f) for f in f_coeffs),
        c_coeffs=tuple(float(x) for x in c),
        d_coeffs=tuple(float(x) for x in d),
        C1=c1_value,
        truncation_N=N,
        radius_estimate=radius,
        sigma2=p.sigma2,
        c1_source=source,
    )
    logger.info(
        "frobenius_series_built", theta=p.theta, terms=N, radius=radius, c1=c1_value, c1_source=source
    )
    table = series.evaluate(u_grid) if u_grid is not None else None
    return series, table


def dufresne_laplace(p: BmDriftParams, u: float, drift: float = 1.0) -> float:
    """
    E[e^{-uV}] for V = int_0^inf e^{-xi_s} drift ds, i.e. V = s / Gamma_theta with s = 2 drift/sigma^2:
    2 (su)^{theta/2} K_theta(2 sqrt(su)) / Gamma(theta).
    """
    if u < 0:
        raise DomainError(f"Laplace transform needs u >= 0, got {u}")
    if u == 0:
        return 1.0
    theta = p.theta
    su = 2.0 * drift / p.sigma2 * u
    z = 2.0 * math.sqrt(su)
    log_value = math.log(2.0) + 0.5 * theta * math.log(su) + math.log(float(kve(theta, z))) - z
    return math.exp(log_value - float(gammaln(theta)))
