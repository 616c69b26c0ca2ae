"""
Support of L(V) for V = int_0^inf e^{-xi_{s-}} d eta_s with independent xi and eta.

Case tables:
  eta_t = t:
    xi_t = b t, b > 0                                     -> {1/b}
    xi non-deterministic subordinator with drift b > 0    -> [0, 1/b]
    xi non-deterministic, finite variation, drift b > 0,
      no positive jumps                                   -> [1/b, inf)
    otherwise                                             -> [0, inf)
  general eta:
    eta infinite variation, or jumps of both signs        -> R
    eta finite variation, drift a, only positive jumps:
      a >= 0: [a/b, inf) if xi f.v. with drift b > 0 and no positive jumps, else [0, inf)
      a < 0:  [a/b, inf) if xi subordinator with drift b > 0, else R
    eta finite variation, drift a, only negative jumps:
      a > 0:  (-inf, a/b] if xi subordinator with drift b > 0, else R
      a <= 0: (-inf, a/b] if xi f.v. with drift b > 0 and no positive jumps, else (-inf, 0]
    eta_t = a t: the eta_t = t table scaled by a

Almost-sure convergence of V is the caller's responsibility.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from levyrange.exceptions import DomainError
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import SupportResult
from levyrange.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ProcessShape:
    """Predicates of a triplet that the support tables branch on."""

    is_deterministic_drift: bool
    is_subordinator: bool
    finite_variation: bool
    fv_drift: float | None
    nu_pos_mass: bool
    nu_neg_mass: bool
    infinite_variation: bool

    def __post_init__(self) -> None:
        if self.finite_variation == self.infinite_variation:
            raise ValueError("exactly one of finite_variation / infinite_variation must hold")
        if self.is_subordinator and not (
            self.finite_variation
            and not self.nu_neg_mass
            and self.fv_drift is not None
            and self.fv_drift >= 0
        ):
            raise ValueError("inconsistent subordinator shape")

    @property
    def positive_drift_fv_no_up_jumps(self) -> bool:
        """Finite variation with drift b > 0 and nu((0, inf)) = 0."""
        return (
            self.finite_variation
            and self.fv_drift is not None
            and self.fv_drift > 0
            and not self.nu_pos_mass
        )

    @property
    def subordinator_with_positive_drift(self) -> bool:
        return self.is_subordinator and self.fv_drift is not None and self.fv_drift > 0

    def to_dict(self) -> dict[str, object]:
        return asdict(self)


def shape_of(t: LevyTriplet) -> ProcessShape:
    """
    Compute the shape predicates analytically from the triplet.

    Raises:
        InconclusiveShapeError: If the Lévy measure cannot certify its small-jump moment
    """
    measure = t.levy_measure
    fv_drift = t.fv_drift
    finite_variation = t.sigma2 == 0 and fv_drift is not None
    nu_pos = measure.positive_mass() > 0
    nu_neg = measure.negative_mass() > 0
    return ProcessShape(
        is_deterministic_drift=t.sigma2 == 0 and not nu_pos and not nu_neg,
        is_subordinator=finite_variation and not nu_neg and fv_drift is not None and fv_drift >= 0,
        finite_variation=finite_variation,
        fv_drift=fv_drift if finite_variation else None,
        nu_pos_mass=nu_pos,
        nu_neg_mass=nu_neg,
        infinite_variation=not finite_variation,
    )


def _check_drifts_up(xi: LevyTriplet, shape: ProcessShape) -> None:
    mean = xi.mean()
    if mean is not None and mean <= 0:
        raise DomainError(f"xi does not drift to +inf (E[xi_1] = {mean:g} <= 0)")
    if shape.finite_variation and not shape.nu_pos_mass and (shape.fv_drift or 0.0) <= 0:
        raise DomainError("xi of finite variation without upward jumps needs a positive drift")


def require_drift_to_infinity(xi: LevyTriplet) -> None:
    """
    Raises:
        DomainError: If xi is detectably not drifting to +inf
    """
    _check_drifts_up(xi, shape_of(xi))


def support_eta_is_time(xi: LevyTriplet) -> SupportResult:
    """
    Support of int_0^inf e^{-xi_s} ds.

    Raises:
        DomainError: If xi is detectably not drifting to +inf
    """
    shape = shape_of(xi)
    _check_drifts_up(xi, shape)
    b = shape.fv_drift

    if shape.is_deterministic_drift:
        assert b is not None
        result = SupportResult.point(1.0 / b)
    elif shape.subordinator_with_positive_drift:
        assert b is not None
        result = SupportResult.interval(0.0, 1.0 / b)
    elif shape.positive_drift_fv_no_up_jumps:
        assert b is not None
        result = SupportResult.right_half_line(1.0 / b)
    else:
        result = SupportResult.right_half_line(0.0)

    logger.info("support_classified", case="eta_is_time", support=result.describe())
    return result


def support_of_functional(xi: LevyTriplet, eta: LevyTriplet) -> SupportResult:
    """Support of L(V) for independent xi and eta (convergence assumed)."""
    eta_shape = shape_of(eta)
    xi_shape = shape_of(xi)

    if eta_shape.infinite_variation or (eta_shape.nu_pos_mass and eta_shape.nu_neg_mass):
        result = SupportResult.full_line()
    else:
        a = eta_shape.fv_drift
        assert a is not None
        b = xi_shape.fv_drift
        if not eta_shape.nu_pos_mass and not eta_shape.nu_neg_mass:
            result = SupportResult.point(0.0) if a == 0 else support_eta_is_time(xi).scaled(a)
        elif eta_shape.nu_pos_mass:
            result = _upward_jumps_case(a, b, xi_shape)
        else:
            result = _downward_jumps_case(a, b, xi_shape)

    logger.info("support_classified", case="general", support=result.describe())
    return result


def _upward_jumps_case(a: float, b: float | None, xi_shape: ProcessShape) -> SupportResult:
    if a >= 0:
        if xi_shape.positive_drift_fv_no_up_jumps:
            assert b is not None
            return SupportResult.right_half_line(a / b)
        return SupportResult.right_half_line(0.0)
    if xi_shape.subordinator_with_positive_drift:
        assert b is not None
        return SupportResult.right_half_line(a / b)
    return SupportResult.full_line()


def _downward_jumps_case(a: float, b: float | None, xi_shape: ProcessShape) -> SupportResult:
    if a > 0:
        if xi_shape.subordinator_with_positive_drift:
            assert b is not None
            return SupportResult.left_half_line(a / b)
        return SupportResult.full_line()
    if xi_shape.positive_drift_fv_no_up_jumps:
        assert b is not None
        return SupportResult.left_half_line(a / b)
    return SupportResult.left_half_line(0.0)


def positivity_check(eta: LevyTriplet) -> bool:
    """V >= 0 almost surely iff eta is a subordinator."""
    return shape_of(eta).is_subordinator
