"""
Runtime settings for rankone.

Every numeric default that can change a convexity verdict (grid bounds and
size, tolerances, growth anchor, oracle sampling) is defined here, so any
report can be traced back to one configuration source. Values come from
``RANKONE_*`` environment variables, then ``.env``, then the defaults below.

Author: rankone maintainers
Version: 1.0.0
"""

import logging
from functools import lru_cache

from pydantic import field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

ENVIRONMENTS = ("development", "staging", "production", "testing")


class Settings(BaseSettings):
    """
    Process-wide defaults.

    Request models (CheckConfig, SampleSpec) copy their defaults from here;
    explicit CLI flags or request fields override them per call. Environment
    lookups ignore case, so ``rankone_grid_n`` works like ``RANKONE_GRID_N``.
    """

    model_config = SettingsConfigDict(
        env_prefix="RANKONE_",  # RANKONE_LOG_LEVEL, RANKONE_GRID_N, ...
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Service identity
    app_name: str = "rankone"
    app_version: str = "1.0.0"  # Echoed as tool_version in every report
    debug: bool = False
    environment: str = "production"

    # API configuration
    api_v1_prefix: str = "/api/v1"

    # Logging configuration
    log_level: str = "WARNING"
    log_format: str = "json"  # json | text

    # Criteria grid (t-grid; theta, eta and r grids are its images)
    grid_min: float = 1.0 + 1e-6
    grid_max: float = 1e3
    grid_n: int = 2048
    separate_grid_n: int = 64  # points per axis for separate convexity
    tol_abs: float = 1e-7
    tol_rel: float = 1e-9

    # Growth bound
    growth_epsilon: float = 1.0
    growth_theta_max: float = 100.0

    # Sampling oracle
    oracle_samples: int = 2000
    oracle_seed: int = 7
    lambda_min: float = 0.1
    lambda_max: float = 10.0
    segment_steps: int = 33
    segment_scale: float = 0.5  # half-length of a scanned segment, relative to |F|
    step_scale: float = 1e-3
    oracle_tol: float = 1e-7

    # Seed for registration-time property checks of energies
    registration_seed: int = 20160101

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v: str) -> str:
        """Deployment stage; only the production check changes behaviour."""
        if v not in ENVIRONMENTS:
            raise ValueError(f"environment must be one of: {', '.join(ENVIRONMENTS)}")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalize the level name and reject unknown levels."""
        level = v.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level: {v}")
        return level

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Only ``json`` and ``text`` formatters exist."""
        if v not in ("json", "text"):
            raise ValueError("log_format must be 'json' or 'text'")
        return v

    @model_validator(mode="after")
    def validate_ranges(self) -> "Settings":
        """
        Cross-field checks for grid and sampling defaults.

        Raises:
            ValueError: If a grid is empty or a range is reversed.
        """
        if not 1.0 < self.grid_min < self.grid_max:
            raise ValueError("grid defaults require 1 < grid_min < grid_max")
        if self.grid_n < 16:
            raise ValueError("grid_n must be at least 16")
        if not 0.0 < self.lambda_min <= self.lambda_max:
            raise ValueError("lambda range must satisfy 0 < lambda_min <= lambda_max")
        return self

    @property
    def is_production(self) -> bool:
        """Production hides API docs and internal error messages."""
        return self.environment == "production"

    @property
    def is_development(self) -> bool:
        """Development enables uvicorn auto-reload."""
        return self.environment == "development"


@lru_cache()
def get_settings() -> Settings:
    """The process-wide Settings, read from the environment once."""
    return Settings()


settings = get_settings()
