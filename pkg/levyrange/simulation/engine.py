"""
Monte Carlo estimates of V = int_0^inf e^{-xi_{s-}} d eta_s and of the GOU recursion.

Paths are independent work items. Path i on stream s always uses the generator
SeedSequence(seed, spawn_key=(s, i)) and results are collected in path order, so samples do
not depend on the number of worker threads.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd
from scipy import stats

from levyrange.config import SimConfig
from levyrange.constants import (
    KS_SIGNIFICANCE,
    STREAM_COPY,
    STREAM_DIRECT,
    STREAM_PREFIX,
    SUPPORT_TOLERANCE,
)
from levyrange.exceptions import DomainError, ValidationError
from levyrange.levy.exponent import exponential_moment_exponent
from levyrange.levy.triplet import LevyTriplet
from levyrange.models import FixedPointReport, SupportCheck, SupportResult
from levyrange.simulation.paths import PathGenerator, SampledPath, path_rng
from levyrange.support.classifier import require_drift_to_infinity
from levyrange.utils.logging import get_logger
from levyrange.utils.profiling import profile_section

logger = get_logger(__name__)

SPLITTING_RULE = "SeedSequence(seed, spawn_key=(stream, path)) -> PCG64"


@dataclass(frozen=True)
class SampleSet:
    """Simulated values of V in path order, with the tail certificate and RNG lineage."""

    values: np.ndarray = field(compare=False)
    truncation_bound: float
    rng_lineage: dict[str, Any]
    horizon: float
    step_dt: float

    def __post_init__(self) -> None:
        if self.values.size == 0:
            raise ValidationError("a SampleSet needs at least one value")

    def __len__(self) -> int:
        return int(self.values.size)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"path": np.arange(self.values.size), "value": self.values})

    def summary(self) -> dict[str, Any]:
        v = self.values
        return {
            "n_paths": int(v.size),
            "mean": float(v.mean()),
            "std": float(v.std(ddof=1)) if v.size > 1 else 0.0,
            "min": float(v.min()),
            "max": float(v.max()),
            "horizon": self.horizon,
            "step_dt": self.step_dt,
            "truncation_bound": self.truncation_bound,
            "rng_lineage": dict(self.rng_lineage),
        }


def _n_steps(length: float, dt: float) -> int:
    return max(1, int(math.ceil(length / dt - 1e-9)))


def _run_paths(
    worker: Callable[[int], tuple[float, float]], n_paths: int, threads: int
) -> tuple[np.ndarray, np.ndarray]:
    if threads < 1:
        raise ValidationError(f"threads must be >= 1, got {threads}")
    if threads == 1:
        results = [worker(i) for i in range(n_paths)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(worker, range(n_paths)))
    values = np.fromiter((r[0] for r in results), dtype=float, count=n_paths)
    endpoints = np.fromiter((r[1] for r in results), dtype=float, count=n_paths)
    return values, endpoints


def weighted_eta_sum(
    xi_path: SampledPath, eta_path: SampledPath, *, sign: float = -1.0, offset: float = 0.0
) -> float:
    """
    Sum of e^{offset + sign xi_{s-}} d eta_s over the path.

    The continuous part of eta is weighted at the left grid point; every eta jump is weighted by
    xi just before its own time, after any xi jump earlier in the same step.
    """
    xi_grid = xi_path.grid_values()
    xi_pre_jump = xi_path.values_before(eta_path.jump_times)
    return math.fsum(
        np.concatenate(
            (
                np.exp(offset + sign * xi_grid) * eta_path.continuous,
                np.exp(offset + sign * xi_pre_jump) * eta_path.jump_sizes,
            )
        )
    )


def _eta_scale(eta: LevyTriplet) -> float:
    mean = eta.mean()
    if mean is None:
        return math.inf
    return abs(mean) + math.sqrt(eta.sigma2)


def truncation_bound(xi: LevyTriplet, eta: LevyTriplet, horizon: float, xi_T: np.ndarray) -> float:
    """
    Bound on the discarded tail int_T^inf e^{-xi_s} d eta_s.

    Uses E[e^{-xi_T}] = e^{-T kappa(1)} when kappa(1) > 0, otherwise the smallest simulated
    xi_T with the drift rate E[xi_1].
    """
    scale = _eta_scale(eta)
    if scale == 0:
        return 0.0
    kappa = exponential_moment_exponent(xi, 1.0)
    if math.isfinite(kappa) and kappa > 0:
        return math.exp(-horizon * kappa) * scale / kappa
    mean = xi.mean()
    if mean is None or not mean > 0:
        return math.inf
    return math.exp(-float(np.min(xi_T))) * scale / mean


def simulate_functional(
    xi: LevyTriplet,
    eta: LevyTriplet,
    cfg: SimConfig,
    *,
    threads: int = 1,
    stream: int = STREAM_DIRECT,
    timings: dict[str, float] | None = None,
) -> SampleSet:
    """
    Sums of e^{-xi_{s-}} d eta_s up to the horizon: left-point on the grid for the continuous
    part of eta, exact pre-jump xi for its compound-Poisson jumps.

    Raises:
        DomainError: If xi does not drift to +inf
        ValidationError: If an infinite-activity process has no small_jump_cutoff
        UnsupportedCaseError: If a jump part cannot be simulated
    """
    cfg.validate()
    require_drift_to_infinity(xi)
    horizon = cfg.resolved_horizon(xi.mean())
    dt = cfg.step_dt
    n_steps = _n_steps(horizon, dt)
    xi_gen = PathGenerator.from_triplet(xi, cfg.small_jump_cutoff)
    eta_gen = PathGenerator.from_triplet(eta, cfg.small_jump_cutoff)

    def one_path(i: int) -> tuple[float, float]:
        rng = path_rng(cfg.seed, stream, i)
        xi_path = xi_gen.sample(rng, n_steps, dt)
        eta_path = eta_gen.sample(rng, n_steps, dt)
        return weighted_eta_sum(xi_path, eta_path), xi_path.endpoint()

    start = time.perf_counter()
    with profile_section("simulate_paths", timings):
        values, xi_T = _run_paths(one_path, cfg.n_paths, threads)
    bound = truncation_bound(xi, eta, n_steps * dt, xi_T)
    lineage = {"seed": cfg.seed, "stream": stream, "n_paths": cfg.n_paths, "rule": SPLITTING_RULE}
    logger.info(
        "simulation_completed",
        n_paths=cfg.n_paths,
        horizon=n_steps * dt,
        steps=n_steps,
        threads=threads,
        truncation_bound=bound,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
    )
    return SampleSet(values, bound, lineage, n_steps * dt, dt)


def empirical_laplace(samples: SampleSet, u: float) -> tuple[float, float]:
    """Mean of e^{-u V} and its standard error (ddof=1; zero for a single sample)."""
    if not u > 0:
        raise DomainError(f"empirical Laplace transform needs u > 0, got {u}")
    w = np.exp(-u * samples.values)
    n = w.size
    se = float(w.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return float(w.mean()), se


def gou_marginal(
    xi: LevyTriplet,
    eta: LevyTriplet,
    cfg: SimConfig,
    t: float,
    initial: np.ndarray,
    *,
    threads: int = 1,
    stream: int = STREAM_PREFIX,
) -> np.ndarray:
    """e^{-xi_t} (V_0 + int_0^t e^{xi_{s-}} d eta_s) per path, with V_0 = initial[i]."""
    if not t > 0:
        raise DomainError(f"GOU time must be positive, got {t}")
    cfg.validate()
    v0 = np.asarray(initial, dtype=float)
    dt = cfg.step_dt
    n_steps = _n_steps(t, dt)
    xi_gen = PathGenerator.from_triplet(xi, cfg.small_jump_cutoff)
    eta_gen = PathGenerator.from_triplet(eta, cfg.small_jump_cutoff)

    def one_path(i: int) -> tuple[float, float]:
        rng = path_rng(cfg.seed, stream, i)
        xi_path = xi_gen.sample(rng, n_steps, dt)
        eta_path = eta_gen.sample(rng, n_steps, dt)
        xi_t = xi_path.endpoint()
        prefix = weighted_eta_sum(xi_path, eta_path, sign=1.0, offset=-xi_t)
        return math.exp(-xi_t) * float(v0[i]) + prefix, xi_t

    values, _ = _run_paths(one_path, v0.size, threads)
    return values


def _is_degenerate(values: np.ndarray) -> bool:
    return float(np.ptp(values)) <= 1e-9 * max(1.0, float(np.max(np.abs(values))))


def verify_fixed_point(
    xi: LevyTriplet,
    eta: LevyTriplet,
    cfg: SimConfig,
    t_check: float,
    *,
    threads: int = 1,
    copy_scale: float = 1.0,
) -> FixedPointReport:
    """
    Compare direct samples of V with e^{-xi_t}(V' + int_0^t e^{xi_{s-}} d eta_s), V' independent.

    Point-mass samples are compared by their mean difference against 2 dt (relative); otherwise
    by the two-sample Kolmogorov-Smirnov test at KS_SIGNIFICANCE. ``copy_scale`` multiplies V'
    and exists for negative controls.
    """
    direct = simulate_functional(xi, eta, cfg, threads=threads, stream=STREAM_DIRECT)
    copy = simulate_functional(xi, eta, cfg, threads=threads, stream=STREAM_COPY)
    transformed = gou_marginal(
        xi, eta, cfg, t_check, copy_scale * copy.values, threads=threads, stream=STREAM_PREFIX
    )

    if _is_degenerate(direct.values) and _is_degenerate(transformed):
        level = max(1.0, abs(float(direct.values.mean())))
        statistic = abs(float(direct.values.mean()) - float(transformed.mean()))
        passed = statistic <= 2.0 * cfg.step_dt * level
        report = FixedPointReport(statistic, None, passed, True, t_check)
    else:
        result = stats.ks_2samp(direct.values, transformed)
        p_value = float(result.pvalue)
        report = FixedPointReport(
            float(result.statistic), p_value, p_value >= KS_SIGNIFICANCE, False, t_check
        )
    logger.info(
        "fixed_point_checked",
        statistic=report.statistic,
        p_value=report.p_value,
        passed=report.passed,
        degenerate=report.degenerate,
    )
    return report


def support_consistency(samples: SampleSet, claimed: SupportResult) -> SupportCheck:
    """Fraction of samples beyond the finite endpoints of ``claimed`` by more than 1e-2."""
    v = samples.values
    below = np.maximum(claimed.lower - v, 0.0) if math.isfinite(claimed.lower) else np.zeros_like(v)
    above = np.maximum(v - claimed.upper, 0.0) if math.isfinite(claimed.upper) else np.zeros_like(v)
    deviation = np.maximum(below, above)
    outside = float(np.mean(deviation > SUPPORT_TOLERANCE))
    check = SupportCheck(
        fraction_outside=outside,
        sample_min=float(v.min()),
        sample_max=float(v.max()),
        max_deviation=float(deviation.max()),
        claimed=claimed,
    )
    logger.info(
        "support_checked",
        kind=claimed.kind.value,
        fraction_outside=outside,
        max_deviation=check.max_deviation,
    )
    return check
