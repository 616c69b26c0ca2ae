"""
Positive stable laws and their finite convolutions under xi_t = sigma B_t + a t.

For V with psi_V = -sum_i c_i Gamma(1-alpha_i)/alpha_i u^{alpha_i} the Riccati map gives
psi_eta = -f with

    f(u) = sum_i A_i u^{alpha_i} + sum_{j<i} B_ij u^{alpha_i + alpha_j} + sum_i C_i u^{2 alpha_i},
    A_i  = (a - sigma^2/2) c_i Gamma(1-alpha_i) + (sigma^2/2) c_i Gamma(2-alpha_i),
    B_ij = sigma^2 c_i c_j Gamma(1-alpha_i) Gamma(1-alpha_j),
    C_i  = (sigma^2/2) c_i^2 Gamma(1-alpha_i)^2.

f = sum_k D_k u^{gamma_k} (merged, increasing gamma) is a Bernstein function iff gamma_max <= 1,
D_max >= 0 and sum_{gamma_k < 1} D_k gamma_k / Gamma(1-gamma_k) x^{-1-gamma_k} >= 0 on x > 0.

Gamma values come from scipy.special.gamma (Cephes), accurate to about 15 digits on (0, 2).
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gamma as gamma_fn

from levyrange.brownian.riccati import BmDriftParams
from levyrange.constants import POSITIVITY_GRID_POINTS
from levyrange.exceptions import DomainError, ValidationError
from levyrange.levy.exponent import LaplaceExponent
from levyrange.levy.measures import (
    ExpPolyDensity,
    LevyMeasureSpec,
    StableDensity,
    ZeroMeasure,
    combine,
)
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import Decision, DriftEstimate, EtaWitness, RangeVerdict
from levyrange.utils.logging import get_logger

logger = get_logger(__name__)

METHOD = "stable"
_MERGE_TOL = 1e-14
# relative size of the positivity function below which its sign is not trusted
_SIGN_TOL = 1e-10
_DUFRESNE_TOL = 1e-12


@dataclass(frozen=True)
class StableComponent:
    alpha: float
    c: float
    b: float = 0.0


@dataclass(frozen=True)
class StableConvolutionSpec:
    """Independent sum of positive alpha_i-stable laws with drifts b_i, alphas increasing."""

    components: tuple[StableComponent, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ValidationError("a stable convolution needs at least one component")
        previous = 0.0
        for comp in self.components:
            if not (0 < comp.alpha < 1):
                raise ValidationError(f"stable index must lie in (0, 1), got {comp.alpha}")
            if comp.alpha <= previous:
                raise ValidationError("stable indices must be strictly increasing")
            if not (comp.c > 0 and math.isfinite(comp.c)):
                raise ValidationError(f"stable scale c must be positive, got {comp.c}")
            if not (comp.b >= 0 and math.isfinite(comp.b)):
                raise ValidationError(f"stable drift b must be >= 0, got {comp.b}")
            previous = comp.alpha

    @classmethod
    def single(cls, alpha: float, c: float, b: float = 0.0) -> StableConvolutionSpec:
        return cls((StableComponent(alpha, c, b),))

    @classmethod
    def from_components(
        cls, components: Iterable[tuple[float, float] | tuple[float, float, float]]
    ) -> StableConvolutionSpec:
        """Build from (alpha, c[, b]) tuples in any order."""
        parts = sorted((StableComponent(*comp) for comp in components), key=lambda s: s.alpha)
        return cls(tuple(parts))

    @property
    def alphas(self) -> tuple[float, ...]:
        return tuple(comp.alpha for comp in self.components)

    @property
    def drift(self) -> float:
        return math.fsum(comp.b for comp in self.components)

    def psi(self) -> LaplaceExponent:
        terms = [(comp.alpha, -comp.c * gamma_fn(1.0 - comp.alpha) / comp.alpha) for comp in self.components]
        if self.drift > 0:
            terms.append((1.0, -self.drift))
        return LaplaceExponent.power_sum(terms, "stable")

    def levy_measure(self) -> LevyMeasureSpec:
        return combine(*(StableDensity(comp.alpha, comp.c) for comp in self.components))

    def to_dict(self) -> dict[str, object]:
        return {
            "components": [
                {"alpha": comp.alpha, "c": comp.c, "b": comp.b} for comp in self.components
            ]
        }


@dataclass(frozen=True)
class PreimagePolynomialForm:
    """f(u) = sum_k D_k u^{gamma_k} with distinct increasing exponents in (0, 2)."""

    terms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        previous = 0.0
        for exponent, coefficient in self.terms:
            if not (0 < exponent < 2):
                raise ValidationError(f"exponents must lie in (0, 2), got {exponent}")
            if exponent <= previous:
                raise ValidationError("exponents must be strictly increasing")
            if coefficient == 0:
                raise ValidationError("zero coefficients must be merged away")
            previous = exponent

    @classmethod
    def merged(cls, raw: Iterable[tuple[float, float]]) -> PreimagePolynomialForm:
        """Sort, merge equal exponents and drop coefficients that cancel to roundoff."""
        groups: list[tuple[float, list[float]]] = []
        for exponent, coefficient in sorted(raw):
            if groups and abs(exponent - groups[-1][0]) <= _MERGE_TOL:
                groups[-1][1].append(coefficient)
            else:
                groups.append((exponent, [coefficient]))
        terms = []
        for exponent, coefficients in groups:
            total = math.fsum(coefficients)
            scale = max(abs(c) for c in coefficients)
            if abs(total) > _MERGE_TOL * scale:
                terms.append((exponent, total))
        return cls(tuple(terms))

    def __call__(self, u: float) -> float:
        return math.fsum(d * u**g for g, d in self.terms)

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(g for g, _ in self.terms)

    def eta_exponent(self) -> LaplaceExponent:
        """psi_eta = -f."""
        if not self.terms:
            return LaplaceExponent.zero()
        return LaplaceExponent.power_sum([(g, -d) for g, d in self.terms], "stable")

    def drift(self) -> float:
        return math.fsum(d for g, d in self.terms if g == 1.0)

    def density_coefficients(self) -> list[tuple[float, float]]:
        """(gamma_k, E_k) with E_k = D_k gamma_k / Gamma(1 - gamma_k) for gamma_k < 1."""
        return [(g, d * g / gamma_fn(1.0 - g)) for g, d in self.terms if g < 1.0]

    def to_dict(self) -> dict[str, object]:
        return {"terms": [{"exponent": g, "coefficient": d} for g, d in self.terms]}


@dataclass(frozen=True)
class StableMixingMeasure:
    """Discrete mixing measure m(d alpha) = sum_j mass_j delta_{alpha_j}."""

    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        for alpha, mass in self.atoms:
            if not alpha > 0:
                raise ValidationError(f"mixing atoms must sit at alpha > 0, got {alpha}")
            if not (mass > 0 and math.isfinite(mass)):
                raise ValidationError(f"mixing masses must be positive, got {mass}")


def stable_psi(alpha: float, c: float) -> LaplaceExponent:
    """
    psi(u) = -(c Gamma(1-alpha)/alpha) u^alpha of the positive stable law with density c x^{-1-alpha}.

    Raises:
        DomainError: If alpha is outside (0, 1) or c <= 0
    """
    if not (0 < alpha < 1):
        raise DomainError(f"stable index must lie in (0, 1), got {alpha}")
    if not (c > 0 and math.isfinite(c)):
        raise DomainError(f"stable scale c must be positive, got {c}")
    return LaplaceExponent.power_sum([(alpha, -c * gamma_fn(1.0 - alpha) / alpha)], "stable")


def expansion_coefficients(
    spec: StableConvolutionSpec, p: BmDriftParams
) -> dict[str, list[tuple[float, float]]]:
    """
    Unmerged (exponent, coefficient) lists for the A, B and C families of f.

    A_i is kept in its two-term form so that the cancellation at alpha = 1/2, a = sigma^2/4
    happens in the arithmetic itself.
    """
    half = p.half_sigma2
    a_terms, b_terms, c_terms = [], [], []
    comps = spec.components
    for i, comp in enumerate(comps):
        g1 = gamma_fn(1.0 - comp.alpha)
        a_terms.append((comp.alpha, (p.a - half) * comp.c * g1))
        a_terms.append((comp.alpha, half * comp.c * gamma_fn(2.0 - comp.alpha)))
        c_terms.append((2.0 * comp.alpha, half * comp.c * comp.c * g1 * g1))
        for other in comps[:i]:
            b_terms.append(
                (
                    comp.alpha + other.alpha,
                    p.sigma2 * comp.c * other.c * g1 * gamma_fn(1.0 - other.alpha),
                )
            )
    return {"A": a_terms, "B": b_terms, "C": c_terms}


def preimage_form(spec: StableConvolutionSpec, p: BmDriftParams) -> PreimagePolynomialForm:
    coefficients = expansion_coefficients(spec, p)
    return PreimagePolynomialForm.merged(
        coefficients["A"] + coefficients["B"] + coefficients["C"]
    )


def _positivity_minimum(coefficients: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """
    Minimum over x > 0 of h(x) / sum_k |E_k| x^{-1-gamma_k}, h(x) = sum_k E_k x^{-1-gamma_k}.

    Returns (relative minimum, argmin x). The search window covers every pairwise crossover
    of the terms by three decades on each side.
    """
    gammas = np.array([g for g, _ in coefficients])
    values = np.array([e for _, e in coefficients])

    def relative(log_x: float) -> float:
        powers = np.exp(-(1.0 + gammas) * log_x)
        return float(np.dot(values, powers) / np.dot(np.abs(values), powers))

    crossings = [0.0]
    for i in range(len(gammas)):
        for j in range(i):
            ratio = abs(values[i]) / abs(values[j])
            crossings.append(math.log(ratio) / (gammas[i] - gammas[j]))
    lo = min(crossings) - 3.0 * math.log(10.0)
    hi = max(crossings) + 3.0 * math.log(10.0)
    grid = np.linspace(lo, hi, POSITIVITY_GRID_POINTS)
    sampled = np.array([relative(float(t)) for t in grid])
    k = int(np.argmin(sampled))
    left, right = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    best_t, best = float(grid[k]), float(sampled[k])
    if right > left:
        refined = minimize_scalar(relative, bounds=(left, right), method="bounded")
        if refined.success and refined.fun < best:
            best_t, best = float(refined.x), float(refined.fun)
    return best, math.exp(best_t)


def power_sum_measure(terms: Sequence[tuple[float, float]]) -> LevyMeasureSpec:
    """
    Lévy measure with density sum_i E_i x^{-1-gamma_i} on (0, inf), gamma_i in (0, 1).

    Positive coefficients give a sum of stable densities; mixed signs give a single density
    with its analytic derivative, which is a Lévy measure only where the sum stays >= 0.
    """
    frozen = tuple((float(g), float(e)) for g, e in terms if e != 0)
    if not frozen:
        return ZeroMeasure()
    for g, _ in frozen:
        if not 0 < g < 1:
            raise ValidationError(f"power-sum exponents must lie in (0, 1), got {g}")
    if all(e > 0 for _, e in frozen):
        return combine(*(StableDensity(g, e) for g, e in frozen))
    return ExpPolyDensity(
        density_fn=lambda x: math.fsum(e * x ** (-1.0 - g) for g, e in frozen),
        zero_index=max(g for g, _ in frozen),
        tail_index=min(g for g, _ in frozen),
        label="power_sum",
        derivative_fn=lambda x: math.fsum(-(1.0 + g) * e * x ** (-2.0 - g) for g, e in frozen),
    )


def _witness_from_form(form: PreimagePolynomialForm) -> tuple[EtaWitness, LevyTriplet]:
    drift = form.drift()
    measure = power_sum_measure(form.density_coefficients())
    triplet = LevyTriplet.subordinator(drift, measure)
    witness = EtaWitness(
        exponent=form.eta_exponent(),
        drift=DriftEstimate(value=drift, converged=True, spread=0.0),
        triplet=triplet,
    )
    return witness, triplet


def _verdict(
    decision: Decision,
    certificate: str,
    *,
    witness: EtaWitness | None = None,
    details: dict[str, object] | None = None,
) -> RangeVerdict:
    logger.info("range_check_completed", method=METHOD, decision=decision.value)
    return RangeVerdict(decision, certificate, METHOD, witness, dict(details or {}))


def stable_range_check(spec: StableConvolutionSpec, a: float, sigma: float) -> RangeVerdict:
    """
    Exact membership of a positive stable convolution in the range under sigma B_t + a t.

    Rejects positive drifts, alpha_n > 1/2 and alpha_1 > 2a/sigma^2; accepts when
    alpha_n <= min(2a/sigma^2, 1/2); decides the zone in between through the positivity of the
    pre-image Lévy density.
    """
    p = BmDriftParams(a, sigma)
    theta = p.theta
    alphas = spec.alphas
    details: dict[str, object] = {"theta": theta, "alphas": list(alphas)}

    drifted = [comp for comp in spec.components if comp.b > 0]
    if drifted:
        return _verdict(
            Decision.REJECT,
            f"component alpha={drifted[0].alpha:g} has drift b={drifted[0].b:g} > 0; "
            "laws in the range have drift 0",
            details=details,
        )
    if alphas[-1] > 0.5:
        return _verdict(
            Decision.REJECT,
            f"largest stable index {alphas[-1]:g} > 1/2",
            details=details,
        )
    if alphas[0] > theta:
        return _verdict(
            Decision.REJECT,
            f"smallest stable index {alphas[0]:g} > 2a/sigma^2 = {theta:g}",
            details=details,
        )

    form = preimage_form(spec, p)
    details["preimage"] = form.to_dict()
    if alphas[-1] <= theta:
        witness, _ = _witness_from_form(form)
        return _verdict(
            Decision.ACCEPT,
            f"all stable indices <= min(2a/sigma^2, 1/2) = {min(theta, 0.5):g}",
            witness=witness,
            details=details,
        )
    return _residual_zone(form, details)


def _residual_zone(form: PreimagePolynomialForm, details: dict[str, object]) -> RangeVerdict:
    top_exponent, top_coefficient = form.terms[-1]
    if top_exponent > 1.0 or top_coefficient < 0:
        return _verdict(
            Decision.REJECT,
            f"leading term {top_coefficient:.6g} u^{top_exponent:g} of -psi_eta is not admissible",
            details=details,
        )
    density = form.density_coefficients()
    if all(e >= 0 for _, e in density):
        witness, _ = _witness_from_form(form)
        return _verdict(
            Decision.ACCEPT, "pre-image density coefficients are all non-negative",
            witness=witness, details=details,
        )

    near_zero = density[-1][1]
    near_infinity = density[0][1]
    if near_zero < 0 or near_infinity < 0:
        where = "0" if near_zero < 0 else "infinity"
        return _verdict(
            Decision.REJECT,
            f"pre-image Lévy density is negative near {where}",
            details=details,
        )

    minimum, x_min = _positivity_minimum(density)
    details["positivity_minimum"] = {"relative_value": minimum, "x": x_min}
    if minimum < -_SIGN_TOL:
        return _verdict(
            Decision.REJECT,
            f"pre-image Lévy density is negative at x={x_min:.6g}",
            details=details,
        )
    if minimum < 0:
        return _verdict(
            Decision.INCONCLUSIVE,
            f"pre-image Lévy density vanishes to roundoff at x={x_min:.6g}",
            details=details,
        )
    witness, _ = _witness_from_form(form)
    return _verdict(
        Decision.ACCEPT,
        "pre-image Lévy density is non-negative on (0, inf)",
        witness=witness,
        details=details,
    )


def stable_preimage(alpha: float, c: float, a: float, sigma: float) -> LevyTriplet:
    """
    Subordinator eta with Phi_xi(L(eta_1)) equal to the positive alpha-stable law with scale c.

    For alpha < 1/2 the Lévy density is
    c alpha (a - sigma^2 alpha/2) x^{-alpha-1} + sigma^2 c^2 alpha Gamma(1-alpha)^2 / Gamma(1-2alpha) x^{-2alpha-1};
    at alpha = 1/2 the u^{2 alpha} term becomes the drift sigma^2 c^2 pi / 2.

    Raises:
        DomainError: If the stable law is not in the range for (a, sigma)
    """
    spec = StableConvolutionSpec.single(alpha, c)
    verdict = stable_range_check(spec, a, sigma)
    if verdict.decision is not Decision.ACCEPT:
        raise DomainError(f"no subordinator pre-image: {verdict.certificate}")
    _, triplet = _witness_from_form(preimage_form(spec, BmDriftParams(a, sigma)))
    return triplet


def closure_class_psi(m: StableMixingMeasure) -> LaplaceExponent:
    """
    psi(u) = -sum_j mass_j Gamma(1-alpha_j)/alpha_j u^{alpha_j}.

    Raises:
        DomainError: If an atom sits at alpha >= 1
    """
    if not m.atoms:
        return LaplaceExponent.zero()
    for alpha, _ in m.atoms:
        if alpha >= 1:
            raise DomainError(f"mixing atom at alpha={alpha:g} >= 1")
    return LaplaceExponent.power_sum(
        [(alpha, -mass * gamma_fn(1.0 - alpha) / alpha) for alpha, mass in m.atoms], "stable"
    )


def mixing_range_check(m: StableMixingMeasure, a: float, sigma: float) -> RangeVerdict:
    """Range membership of the law with exponent closure_class_psi(m)."""
    closure_class_psi(m)
    if not m.atoms:
        witness = EtaWitness(
            LaplaceExponent.zero(), DriftEstimate(0.0, True, 0.0), LevyTriplet.drift(0.0)
        )
        return _verdict(Decision.ACCEPT, "empty mixing measure gives delta_0", witness=witness)

    merged: dict[float, float] = {}
    for alpha, mass in m.atoms:
        merged[alpha] = merged.get(alpha, 0.0) + mass
    spec = StableConvolutionSpec.from_components(merged.items())
    p = BmDriftParams(a, sigma)
    bound = min(p.theta, 0.5)
    if all(alpha <= bound for alpha in merged):
        witness, _ = _witness_from_form(preimage_form(spec, p))
        return _verdict(
            Decision.ACCEPT,
            f"all mixing atoms lie in (0, {bound:g}]",
            witness=witness,
            details={"theta": p.theta, "atoms": sorted(merged.items())},
        )
    return stable_range_check(spec, a, sigma)


def dufresne_check(a: float, sigma: float) -> bool:
    """True iff 2a/sigma^2 = 1/2, where the functional of eta_t = t is 1/2-stable."""
    return abs(BmDriftParams(a, sigma).theta - 0.5) < _DUFRESNE_TOL
