"""Configuration settings for the levyrange package."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from levyrange.constants import (
    DEFAULT_G_GRID_HI,
    DEFAULT_G_GRID_LO,
    DEFAULT_G_GRID_POINTS,
    DEFAULT_GRID_HI,
    DEFAULT_GRID_LO,
    DEFAULT_GRID_POINTS,
    DEFAULT_MAX_ORDER,
    DEFAULT_N_PATHS,
    DEFAULT_SEED,
    DEFAULT_SERIES_TERMS,
    DEFAULT_SMALL_JUMP_CUTOFF,
    DEFAULT_STEP_DT,
    HORIZON_DRIFT_FACTOR,
    MIN_GRID_DECADES,
    MIN_HORIZON,
)


@dataclass
class NumericsConfig:
    """
    Grids and orders used by the analytic criteria.

    CLI layer should use CLIConfig (Pydantic) and convert to this.
    """

    grid_lo: float = DEFAULT_GRID_LO
    grid_hi: float = DEFAULT_GRID_HI
    grid_points: int = DEFAULT_GRID_POINTS
    max_order: int = DEFAULT_MAX_ORDER
    series_terms: int = DEFAULT_SERIES_TERMS
    g_grid_lo: float = DEFAULT_G_GRID_LO
    g_grid_hi: float = DEFAULT_G_GRID_HI
    g_grid_points: int = DEFAULT_G_GRID_POINTS

    def validate(self) -> None:
        """
        Validate configuration values.

        Raises:
            ValidationError: If any configuration value is invalid
        """
        from levyrange.exceptions import ValidationError

        if not (0 < self.grid_lo < self.grid_hi):
            raise ValidationError(
                f"Bernstein grid must satisfy 0 < grid_lo < grid_hi, got [{self.grid_lo}, {self.grid_hi}]"
            )
        if math.log10(self.grid_hi / self.grid_lo) < MIN_GRID_DECADES:
            raise ValidationError(
                f"Bernstein grid must span at least {MIN_GRID_DECADES:g} decades"
            )
        if self.grid_points < 10:
            raise ValidationError("grid_points must be at least 10")
        if self.max_order < 2:
            raise ValidationError("max_order must be at least 2")
        if self.series_terms < 2:
            raise ValidationError("series_terms must be at least 2")
        if not (0 < self.g_grid_lo < self.g_grid_hi):
            raise ValidationError("G grid must satisfy 0 < g_grid_lo < g_grid_hi")
        if self.g_grid_points < 20:
            raise ValidationError("g_grid_points must be at least 20")

    def bernstein_grid(self):
        import numpy as np

        return np.logspace(math.log10(self.grid_lo), math.log10(self.grid_hi), self.grid_points)

    def g_grid(self):
        import numpy as np

        return np.logspace(
            math.log10(self.g_grid_lo), math.log10(self.g_grid_hi), self.g_grid_points
        )

    def to_dict(self) -> dict[str, object]:
        return asdict(self)


@dataclass
class SimConfig:
    """
    Monte Carlo settings for the exponential functional.

    ``horizon_T=None`` resolves to max(30, 20/E[xi_1]) for the simulated xi.
    """

    n_paths: int = DEFAULT_N_PATHS
    step_dt: float = DEFAULT_STEP_DT
    horizon_T: float | None = None
    seed: int = DEFAULT_SEED
    small_jump_cutoff: float | None = DEFAULT_SMALL_JUMP_CUTOFF

    def validate(self) -> None:
        """
        Validate configuration values.

        Raises:
            ValidationError: If any configuration value is invalid
        """
        from levyrange.exceptions import ValidationError

        if self.n_paths < 1:
            raise ValidationError(f"n_paths must be >= 1, got {self.n_paths}")
        if not (self.step_dt > 0 and math.isfinite(self.step_dt)):
            raise ValidationError(f"step_dt must be positive, got {self.step_dt}")
        if self.horizon_T is not None:
            if not (self.horizon_T > 0 and math.isfinite(self.horizon_T)):
                raise ValidationError(f"horizon_T must be positive, got {self.horizon_T}")
            if self.horizon_T < self.step_dt:
                raise ValidationError("horizon_T must be at least one step")
        if not (0 <= self.seed < 2**64):
            raise ValidationError("seed must be an unsigned 64-bit integer")
        if self.small_jump_cutoff is not None and not (0 < self.small_jump_cutoff < 1):
            raise ValidationError("small_jump_cutoff must lie in (0, 1)")

    def resolved_horizon(self, mean_xi: float | None) -> float:
        """Horizon used for a xi with the given mean (None when the mean is not finite)."""
        if self.horizon_T is not None:
            return float(self.horizon_T)
        if mean_xi is None or mean_xi <= 0 or not math.isfinite(mean_xi):
            return MIN_HORIZON
        return max(MIN_HORIZON, HORIZON_DRIFT_FACTOR / mean_xi)

    def to_dict(self) -> dict[str, object]:
        return asdict(self)
