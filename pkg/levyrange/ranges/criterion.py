"""
Membership of a positive law mu in the range R_xi^+ of eta -> L(int_0^inf e^{-xi_{s-}} d eta_s).

mu is in the range iff

    g_mu(u) = (gamma - sigma^2/2) u psi_V'(u) - (sigma^2/2) u^2 (psi_V''(u) + psi_V'(u)^2)
              - int (e^{psi_V(u e^{-y}) - psi_V(u)} - 1 + u psi_V'(u) y 1_{|y|<=1}) nu_xi(dy)

is the Laplace exponent of a subordinator eta, which is then the pre-image. The cheaper
necessary conditions (pre-screens, growth of k at 0) run first where they apply.
"""

from __future__ import annotations

import math

import numpy as np

from levyrange.brownian.riccati import BmDriftParams
from levyrange.config import NumericsConfig
from levyrange.constants import (
    GROWTH_FACTOR,
    GROWTH_J_MAX,
    GROWTH_J_MIN,
    GROWTH_RUN_LENGTH,
    RANGE_METHODS,
)
from levyrange.exceptions import DomainError, NumericError
from levyrange.levy.bernstein import describe_grid, is_bernstein
from levyrange.levy.exponent import LaplaceExponent, subordinator_drift_limit
from levyrange.levy.measures import AtomMeasure, ZeroMeasure
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import (
    Decision,
    DriftEstimate,
    EtaWitness,
    GrowthReport,
    RangeVerdict,
)
from levyrange.ranges.laws import KFunction, PositiveLawSpec
from levyrange.utils.logging import get_logger
from levyrange.utils.numerics import decade_points, quad_checked

logger = get_logger(__name__)

_TAYLOR_CUTOFF = 1e-4
_ORIGIN_POINTS = (1e-4, 1e-6, 1e-8, 1e-10)
_ORIGIN_TOL = 1e-9
# laws whose exponent and derivatives are closed forms
_CLOSED_FORM_KINDS = frozenset(
    {"point_mass", "stable", "stable_convolution", "inverse_gamma", "compound_poisson"}
)


def g_mu(mu: PositiveLawSpec, xi: LevyTriplet, u: float) -> float:
    """
    Candidate Laplace exponent of the pre-image eta at u.

    Raises:
        DomainError: If u <= 0
        NumericError: If the nu_xi integral fails to converge
    """
    if not u > 0:
        raise DomainError(f"g_mu needs u > 0, got {u}")
    psi = mu.psi_V
    d1 = psi.deriv1(u)
    d2 = psi.deriv2(u)
    u_d1 = u * d1
    half_sigma2 = 0.5 * xi.sigma2
    value = (xi.gamma - half_sigma2) * u_d1 - half_sigma2 * u * u * (d2 + d1 * d1)

    measure = xi.levy_measure
    if isinstance(measure, ZeroMeasure) or measure.is_zero():
        return value

    psi_u = psi(u)
    taylor = 0.5 * (u_d1 * u_d1 + u_d1 + u * u * d2)

    def integrand(y: float) -> float:
        if abs(y) < _TAYLOR_CUTOFF:
            return taylor * y * y
        compensator = u_d1 * y if abs(y) <= 1.0 else 0.0
        return math.expm1(psi(u * math.exp(-y)) - psi_u) + compensator

    near = measure.integrate(integrand, hi=1.0, label="g_mu_small_jumps")
    far = measure.integrate(integrand, lo=1.0, label="g_mu_large_jumps")
    return value - near - far


def g_mu_exponent(mu: PositiveLawSpec, xi: LevyTriplet) -> LaplaceExponent:
    return LaplaceExponent(lambda u: g_mu(mu, xi, u), family_tag="numeric")


def _require_drift_to_infinity(xi: LevyTriplet) -> None:
    mean = xi.mean()
    if mean is not None and mean <= 0:
        raise DomainError(f"xi does not drift to +inf (E[xi_1] = {mean:g} <= 0)")


def _is_spectrally_negative_infinite_variation(xi: LevyTriplet) -> bool:
    return xi.levy_measure.positive_mass() == 0 and not xi.finite_variation


def prescreen(
    mu: PositiveLawSpec, xi: LevyTriplet, grid: np.ndarray | None = None
) -> str | None:
    """
    Necessary conditions that reject without the Bernstein test; None when all pass.

    Under a spectrally negative xi of infinite variation the law must have drift 0 and a
    non-increasing k; under any xi it cannot be a non-trivial compound Poisson law.
    """
    mass = mu.nu_V_mass
    if mass is not None and 0 < mass < math.inf:
        return (
            f"mu is compound Poisson (Lévy measure of finite mass {mass:g}); "
            "laws in the range have infinite Lévy measure"
        )
    if _is_spectrally_negative_infinite_variation(xi):
        if mu.drift_bV != 0:
            return (
                f"mu has drift b_V = {mu.drift_bV:g} != 0; under a spectrally negative xi of "
                "infinite variation every law in the range has drift 0"
            )
        check_grid = NumericsConfig().bernstein_grid() if grid is None else grid
        if not mu.k_is_non_increasing(check_grid):
            return "k is not non-increasing, so mu is not selfdecomposable"
    return None


def _evaluation_noise(mu: PositiveLawSpec, xi: LevyTriplet) -> float:
    exact_jumps = isinstance(xi.levy_measure, (ZeroMeasure, AtomMeasure))
    if mu.kind in _CLOSED_FORM_KINDS and exact_jumps:
        return 1e-13
    return 1e-10


def _vanishes_at_origin(g: LaplaceExponent) -> tuple[bool, float]:
    values = [abs(g(u)) for u in _ORIGIN_POINTS]
    decreasing = all(b < a for a, b in zip(values, values[1:], strict=False))
    return decreasing or values[-1] <= _ORIGIN_TOL, values[-1]


def _verdict(
    decision: Decision,
    certificate: str,
    method: str,
    *,
    witness: EtaWitness | None = None,
    details: dict[str, object] | None = None,
) -> RangeVerdict:
    logger.info("range_check_completed", method=method, decision=decision.value)
    return RangeVerdict(decision, certificate, method, witness, dict(details or {}))


def check_in_range(
    mu: PositiveLawSpec, xi: LevyTriplet, numerics: NumericsConfig | None = None
) -> RangeVerdict:
    """
    General criterion: accept iff -g_mu is a Bernstein function on the grid.

    Raises:
        DomainError: If xi does not drift to +inf
    """
    method = "general"
    _require_drift_to_infinity(xi)
    numerics = numerics or NumericsConfig()

    certificate = prescreen(mu, xi)
    if certificate is not None:
        return _verdict(Decision.REJECT, certificate, method, details={"stage": "prescreen"})

    g = g_mu_exponent(mu, xi)
    vanishes, smallest = _vanishes_at_origin(g)
    if not vanishes:
        return _verdict(
            Decision.REJECT,
            f"g_mu does not vanish at 0+ (|g_mu(1e-10)| = {smallest:.3g})",
            method,
            details={"stage": "origin"},
        )

    grid = numerics.bernstein_grid()
    verdict = is_bernstein(
        g.negated(), grid, numerics.max_order, noise=_evaluation_noise(mu, xi)
    )
    details: dict[str, object] = {"stage": "bernstein", "bernstein": verdict.to_dict()}
    if verdict.decision is Decision.REJECT:
        assert verdict.violation is not None
        v = verdict.violation
        return _verdict(
            Decision.REJECT,
            f"-g_mu fails the Bernstein sign condition of order {v.order} at u={v.u:.6g} "
            f"(value {v.value:.3g}, bound {v.bound:.3g})",
            method,
            details=details,
        )
    if verdict.decision is Decision.INCONCLUSIVE:
        return _verdict(
            Decision.INCONCLUSIVE,
            f"Bernstein test marginal at {verdict.marginal_points} point(s) on "
            f"{describe_grid(grid)}",
            method,
            details=details,
        )

    drift = _witness_drift(mu, xi, g)
    details["eta_drift"] = drift.to_dict()
    witness = EtaWitness(exponent=g, drift=drift)
    return _verdict(
        Decision.ACCEPT,
        f"-g_mu passes the Bernstein test to order {verdict.max_order_checked} on "
        f"{describe_grid(grid)}",
        method,
        witness=witness,
        details=details,
    )


def _witness_drift(mu: PositiveLawSpec, xi: LevyTriplet, g: LaplaceExponent) -> DriftEstimate:
    """Exact drift from the closed-form pre-image when one exists, else the extrapolated limit."""
    from levyrange.ranges.stable import preimage_form

    params = brownian_params(xi)
    if params is not None and mu.stable_spec is not None:
        return DriftEstimate(preimage_form(mu.stable_spec, params).drift(), True, 0.0)
    return subordinator_drift_limit(g)


def _small_x_integral(k_function: KFunction, x: float) -> float:
    points = decade_points(x * 1e-12, x)
    return quad_checked(
        lambda s: float(k_function(s)), 0.0, x, points=points, limit=400, label="k_near_zero"
    )


def growth_necessary_check(mu: PositiveLawSpec, p: BmDriftParams) -> GrowthReport:
    """
    Necessary condition limsup_{x->0} x^{-1/2} int_0^x k(s) ds < inf and b_V = 0.

    The sequence r_j = x_j^{-1/2} int_0^{x_j} k, x_j = 2^{-j}, is declared divergent when it
    increases over GROWTH_RUN_LENGTH consecutive steps by a total factor of at least
    GROWTH_FACTOR. A limsup of 0 (decay by the same factor over the last steps) means the
    pre-image has no drift; a positive limsup means it has one.

    Raises:
        DomainError: If mu carries no k-function
    """
    if mu.k_function is None:
        raise DomainError("growth condition needs the k-function of mu")
    if mu.drift_bV != 0:
        report = GrowthReport(
            Decision.REJECT, math.nan, None, f"mu has drift b_V = {mu.drift_bV:g} != 0"
        )
        logger.info("growth_check_completed", decision=report.decision.value, theta=p.theta)
        return report

    ratios = []
    try:
        for j in range(GROWTH_J_MIN, GROWTH_J_MAX + 1):
            x = 2.0**-j
            ratios.append(_small_x_integral(mu.k_function, x) / math.sqrt(x))
    except NumericError as exc:
        report = GrowthReport(
            Decision.INCONCLUSIVE, math.nan, None, f"quadrature of k near 0 failed: {exc}"
        )
        logger.info("growth_check_completed", decision=report.decision.value, theta=p.theta)
        return report

    run_start = 0
    for i in range(1, len(ratios)):
        if ratios[i] <= ratios[i - 1]:
            run_start = i
            continue
        length = i - run_start
        if length >= GROWTH_RUN_LENGTH and ratios[i] >= GROWTH_FACTOR * ratios[run_start]:
            x_hi, x_lo = 2.0 ** -(GROWTH_J_MIN + run_start), 2.0 ** -(GROWTH_J_MIN + i)
            report = GrowthReport(
                Decision.REJECT,
                math.inf,
                None,
                f"x^(-1/2) int_0^x k grows by {ratios[i] / ratios[run_start]:.3g} "
                f"between x={x_hi:.3g} and x={x_lo:.3g}",
            )
            logger.info("growth_check_completed", decision=report.decision.value, theta=p.theta)
            return report

    tail = ratios[-GROWTH_RUN_LENGTH - 1 :]
    decaying = all(b < a for a, b in zip(tail, tail[1:], strict=False)) and (
        tail[0] >= GROWTH_FACTOR * tail[-1]
    )
    limsup = 0.0 if decaying else ratios[-1]
    report = GrowthReport(
        Decision.ACCEPT,
        limsup,
        limsup > 0,
        f"x^(-1/2) int_0^x k stays bounded (limsup estimate {limsup:.6g})",
    )
    logger.info("growth_check_completed", decision=report.decision.value, theta=p.theta)
    return report


def eta_drift_limit(mu: PositiveLawSpec, p: BmDriftParams) -> DriftEstimate:
    """b_eta = (sigma^2/2) lim_{u->inf} u psi_V'(u)^2 for a law with b_V = 0."""
    psi = mu.psi_V

    def scaled(u: float) -> float:
        d1 = psi.deriv1(u)
        return -p.half_sigma2 * u * u * d1 * d1

    return subordinator_drift_limit(scaled)


def brownian_params(xi: LevyTriplet) -> BmDriftParams | None:
    """(a, sigma) when xi is sigma B_t + a t with sigma > 0, else None."""
    if xi.sigma2 > 0 and xi.levy_measure.is_zero():
        return BmDriftParams(xi.gamma, math.sqrt(xi.sigma2))
    return None


def decide_membership(
    mu: PositiveLawSpec,
    xi: LevyTriplet,
    method: str = "auto",
    numerics: NumericsConfig | None = None,
) -> RangeVerdict:
    """
    Dispatch to the criterion named by ``method``.

    ``auto`` picks the exact stable decision for stable laws and the G-function criterion for
    finite background measures under Brownian xi, and the general criterion otherwise.

    Raises:
        DomainError: If the method does not apply to (mu, xi)
    """
    from levyrange.ranges.finite_k import finite_k_check
    from levyrange.ranges.stable import stable_range_check

    if method not in RANGE_METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {', '.join(RANGE_METHODS)}")
    _require_drift_to_infinity(xi)
    params = brownian_params(xi)

    if method == "auto":
        if params is not None and mu.stable_spec is not None:
            method = "stable"
        elif params is not None and mu.has_finite_background:
            method = "finite-k"
        else:
            method = "general"
    logger.info("range_method_selected", method=method, law=mu.kind)

    if method == "general":
        return check_in_range(mu, xi, numerics)
    if params is None:
        raise DomainError(f"method {method!r} needs xi = sigma B_t + a t with sigma > 0")
    if method == "stable":
        if mu.stable_spec is None:
            raise DomainError("method 'stable' needs a stable or stable-convolution law")
        return stable_range_check(mu.stable_spec, params.a, params.sigma)
    if method == "finite-k":
        return finite_k_check(mu, params, numerics)

    report = growth_necessary_check(mu, params)
    details = {"growth": report.to_dict()}
    if report.decision is Decision.ACCEPT:
        return _verdict(
            Decision.INCONCLUSIVE,
            f"necessary growth condition holds ({report.certificate}); not sufficient",
            "growth",
            details=details,
        )
    return _verdict(report.decision, report.certificate, "growth", details=details)
