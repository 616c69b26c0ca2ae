"""
Grid paths of Lévy processes given by their triplets.

Each step carries drift and a Gaussian increment on the grid. The compound-Poisson jumps larger
than the cutoff eps sit at exact times, uniform inside their step; compensated jumps below eps
are replaced by their mean, which is zero, so only the compensator of the jumps in (eps, 1]
enters the drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from levyrange.exceptions import ValidationError
from levyrange.levy.measures import TruncatedJumps
from levyrange.levy.triplet import LevyTriplet

# Cutoff used for finite-activity measures when none is configured.
_FINITE_ACTIVITY_CUTOFF = 1e-12


def path_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    """PCG64 generator seeded by SeedSequence(seed, spawn_key=(stream, index))."""
    sequence = np.random.SeedSequence(seed, spawn_key=(stream, index))
    return np.random.Generator(np.random.PCG64(sequence))


def left_points(increments: np.ndarray) -> np.ndarray:
    """Path values at the left end of every step, starting from 0."""
    path = np.empty_like(increments)
    path[0] = 0.0
    np.cumsum(increments[:-1], out=path[1:])
    return path


@dataclass(frozen=True)
class SampledPath:
    """
    One path on [0, n dt]: continuous increments per step plus jumps sorted by time.

    Values "before" a time are left limits: a jump at exactly that time is not included.
    """

    continuous: np.ndarray = field(compare=False)
    jump_times: np.ndarray = field(compare=False)
    jump_sizes: np.ndarray = field(compare=False)
    dt: float

    @property
    def n_steps(self) -> int:
        return int(self.continuous.size)

    def endpoint(self) -> float:
        return float(self.continuous.sum() + self.jump_sizes.sum())

    def jumps_before(self, times: np.ndarray) -> np.ndarray:
        cumulative = np.concatenate(([0.0], np.cumsum(self.jump_sizes)))
        return cumulative[np.searchsorted(self.jump_times, times, side="left")]

    def grid_values(self) -> np.ndarray:
        """Left limits at the step starts k dt."""
        grid = np.arange(self.n_steps) * self.dt
        return left_points(self.continuous) + self.jumps_before(grid)

    def values_before(self, times: np.ndarray) -> np.ndarray:
        """Left limits at arbitrary times; the continuous part is interpolated inside a step."""
        times = np.asarray(times, dtype=float)
        if times.size == 0:
            return np.empty(0)
        steps = np.minimum((times // self.dt).astype(int), self.n_steps - 1)
        fraction = times / self.dt - steps
        base = left_points(self.continuous)[steps]
        return base + self.continuous[steps] * fraction + self.jumps_before(times)


@dataclass(frozen=True)
class PathGenerator:
    """Path sampler for one process; draws Gaussians, jump counts, jump sizes, then jump times."""

    drift_rate: float
    sigma: float
    jumps: TruncatedJumps
    cutoff: float

    @classmethod
    def from_triplet(cls, t: LevyTriplet, cutoff: float | None) -> PathGenerator:
        """
        Raises:
            ValidationError: If the measure has infinite activity and no cutoff is set
            UnsupportedCaseError: If the jump part cannot be truncated (infinite small-jump mean)
        """
        measure = t.levy_measure
        if cutoff is None:
            if not measure.is_finite():
                raise ValidationError(
                    "small_jump_cutoff must be set for a Lévy measure of infinite activity"
                )
            eps = _FINITE_ACTIVITY_CUTOFF
        else:
            eps = float(cutoff)
        jumps = measure.truncate(eps)
        compensator = measure.integrate(lambda x: x, lo=eps, hi=1.0, label="compensator")
        return cls(t.gamma - compensator, math.sqrt(t.sigma2), jumps, eps)

    def sample(self, rng: np.random.Generator, n_steps: int, dt: float) -> SampledPath:
        continuous = np.full(n_steps, self.drift_rate * dt)
        if self.sigma > 0:
            continuous += self.sigma * math.sqrt(dt) * rng.standard_normal(n_steps)
        times = sizes = np.empty(0)
        if self.jumps.rate > 0:
            counts = rng.poisson(self.jumps.rate * dt, n_steps)
            total = int(counts.sum())
            if total:
                sizes = self.jumps.draw(rng, total)
                steps = np.repeat(np.arange(n_steps), counts)
                times = (steps + rng.random(total)) * dt
                order = np.argsort(times, kind="stable")
                times, sizes = times[order], sizes[order]
        return SampledPath(continuous, times, sizes, dt)
