"""Pydantic model for CLI options."""

from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from levyrange.config import NumericsConfig, SimConfig
from levyrange.constants import (
    DEFAULT_G_GRID_HI,
    DEFAULT_G_GRID_LO,
    DEFAULT_G_GRID_POINTS,
    DEFAULT_GRID_HI,
    DEFAULT_GRID_LO,
    DEFAULT_GRID_POINTS,
    DEFAULT_MAX_ORDER,
    DEFAULT_N_PATHS,
    DEFAULT_OUTPUT_FORMAT,
    DEFAULT_SEED,
    DEFAULT_SERIES_TERMS,
    DEFAULT_SMALL_JUMP_CUTOFF,
    DEFAULT_STEP_DT,
    RANGE_METHODS,
)
from levyrange.exceptions import ValidationError


class CLIConfig(BaseModel):
    """Validated representation of CLI options (YAML config file < command line)."""

    model_config = ConfigDict(extra="forbid")

    verbose: bool = False
    quiet: bool = False
    format: Literal["human", "structured"] = DEFAULT_OUTPUT_FORMAT
    method: str = "auto"

    # Analytic grids (kept here to keep CLI defaults in sync with core)
    grid_lo: float = DEFAULT_GRID_LO
    grid_hi: float = DEFAULT_GRID_HI
    grid_points: int = DEFAULT_GRID_POINTS
    max_order: int = DEFAULT_MAX_ORDER
    series_terms: int = DEFAULT_SERIES_TERMS
    g_grid_lo: float = DEFAULT_G_GRID_LO
    g_grid_hi: float = DEFAULT_G_GRID_HI
    g_grid_points: int = DEFAULT_G_GRID_POINTS

    # Simulation
    paths: int = Field(default=DEFAULT_N_PATHS, ge=1)
    dt: float = Field(default=DEFAULT_STEP_DT, gt=0)
    T: float | None = Field(default=None, gt=0)
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    eps: float | None = DEFAULT_SMALL_JUMP_CUTOFF
    threads: int = Field(default=1, ge=1)

    @field_validator("method")
    @classmethod
    def _validate_method(cls, value: str) -> str:
        if value not in RANGE_METHODS:
            raise ValueError(f"method must be one of {RANGE_METHODS}")
        return value

    @model_validator(mode="after")
    def _normalize_output_modes(self) -> CLIConfig:
        if self.quiet:
            object.__setattr__(self, "verbose", False)
        return self

    @property
    def log_level(self) -> str:
        if self.quiet:
            return "ERROR"
        return "INFO" if self.verbose else "WARNING"

    def to_numerics_config(self) -> NumericsConfig:
        """
        Convert to core NumericsConfig and validate.

        Raises:
            ValidationError: if generated NumericsConfig is invalid
        """
        config = NumericsConfig(
            grid_lo=self.grid_lo,
            grid_hi=self.grid_hi,
            grid_points=self.grid_points,
            max_order=self.max_order,
            series_terms=self.series_terms,
            g_grid_lo=self.g_grid_lo,
            g_grid_hi=self.g_grid_hi,
            g_grid_points=self.g_grid_points,
        )
        config.validate()
        return config

    def to_sim_config(self) -> SimConfig:
        """
        Convert to core SimConfig and validate.

        Raises:
            ValidationError: if generated SimConfig is invalid
        """
        config = SimConfig(
            n_paths=self.paths,
            step_dt=self.dt,
            horizon_T=self.T,
            seed=self.seed,
            small_jump_cutoff=self.eps,
        )
        config.validate()
        return config

    @classmethod
    def from_cli(cls, **kwargs) -> CLIConfig:
        """
        Build from CLI args, normalizing validation errors to package ValidationError.
        """
        try:
            return cls(**kwargs)
        except PydanticValidationError as exc:
            raise ValidationError(str(exc)) from exc

    @classmethod
    def from_sources(
        cls,
        cli_args: Mapping[str, Any],
        config_path: str | Path | None = None,
        cli_provided_keys: set[str] | None = None,
    ) -> CLIConfig:
        """
        Merge config from YAML, then CLI. Environment variables are not consulted.

        When ``cli_provided_keys`` is supplied, only those CLI fields override the YAML layer;
        otherwise ``None`` values from ``cli_args`` are ignored.
        """
        merged: dict[str, Any] = {}
        if config_path:
            merged.update(cls._load_yaml_config(config_path))

        cli_args_dict = dict(cli_args)
        if cli_provided_keys is None:
            cli_overrides = {key: value for key, value in cli_args_dict.items() if value is not None}
        else:
            cli_overrides = {
                key: cli_args_dict[key] for key in cli_provided_keys if key in cli_args_dict
            }
        merged.update(cli_overrides)
        return cls.from_cli(**merged)

    @staticmethod
    def _load_yaml_config(path: str | Path) -> dict[str, Any]:
        config_path = Path(path)
        if not config_path.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")

        try:
            with config_path.open("r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except yaml.YAMLError as exc:
            raise ValidationError(f"Invalid YAML in config file: {exc}") from exc

        if not isinstance(data, dict):
            raise ValidationError("Config file must contain a top-level mapping")

        return data
