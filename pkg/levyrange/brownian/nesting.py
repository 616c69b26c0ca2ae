"""Monotonicity of range membership in theta = 2a/sigma^2 (metamorphic harness)."""

from __future__ import annotations

from collections.abc import Iterable
from typing import TYPE_CHECKING

from levyrange.brownian.riccati import BmDriftParams
from levyrange.models import Decision, NestingEntry, NestingReport
from levyrange.utils.logging import get_logger

if TYPE_CHECKING:
    from levyrange.config import NumericsConfig
    from levyrange.ranges.laws import PositiveLawSpec

logger = get_logger(__name__)


def nesting_witness(
    mu: PositiveLawSpec,
    pairs: Iterable[tuple[float, float]],
    *,
    method: str = "auto",
    numerics: NumericsConfig | None = None,
) -> NestingReport:
    """
    Decide mu at every (a, sigma) and report accept-then-reject pairs along increasing theta.

    The range for (a, sigma) equals the range for (a/sigma^2, 1), so acceptance can only grow
    with theta. Inconclusive entries are excluded from the comparison.
    """
    from levyrange.ranges.criterion import decide_membership

    params = sorted((BmDriftParams(a, sigma) for a, sigma in pairs), key=lambda p: p.theta)
    entries = []
    for p in params:
        verdict = decide_membership(mu, p.to_triplet(), method, numerics)
        entries.append(NestingEntry(p.a, p.sigma, p.theta, verdict.decision))

    violations = []
    for i, earlier in enumerate(entries):
        if earlier.decision is not Decision.ACCEPT:
            continue
        for j in range(i + 1, len(entries)):
            later = entries[j]
            if later.decision is Decision.REJECT and later.theta > earlier.theta:
                violations.append((i, j))
    report = NestingReport(tuple(entries), tuple(violations))
    logger.info("nesting_checked", pairs=len(entries), violations=len(violations))
    return report


def scale_identity_check(
    mu: PositiveLawSpec,
    p: BmDriftParams,
    *,
    method: str = "auto",
    numerics: NumericsConfig | None = None,
) -> tuple[NestingEntry, NestingEntry]:
    """Decisions for (a, sigma) and (a/sigma^2, 1); conclusive decisions must agree."""
    from levyrange.ranges.criterion import decide_membership

    entries = []
    for q in (p, p.normalized()):
        verdict = decide_membership(mu, q.to_triplet(), method, numerics)
        entries.append(NestingEntry(q.a, q.sigma, q.theta, verdict.decision))
    original, scaled = entries
    conclusive = Decision.INCONCLUSIVE not in (original.decision, scaled.decision)
    if conclusive and original.decision is not scaled.decision:
        logger.warning(
            "scale_identity_mismatch",
            a=p.a,
            sigma=p.sigma,
            original=original.decision.value,
            scaled=scaled.decision.value,
        )
    return original, scaled
