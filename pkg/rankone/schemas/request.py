"""
Request schemas: check configuration, sampling parameters and energy
selection. Shared by the CLI, the HTTP API and the services layer.
"""

import sys
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from rankone.config import Settings, settings

MACHINE_EPS = sys.float_info.epsilon


class CheckConfig(BaseModel):
    """
    Grids, tolerances and differentiation steps for every criterion.

    The t-grid is log-spaced on [grid_min, grid_max]; the theta, eta and r
    grids are its images so verdicts of the four scalar criteria are directly
    comparable.
    """

    grid_min: float = Field(settings.grid_min, description="Lower end of the t-grid")
    grid_max: float = Field(settings.grid_max, description="Upper end of the t-grid")
    grid_n: int = Field(settings.grid_n, ge=16, description="Number of grid points")
    tol_abs: float = Field(settings.tol_abs, gt=0.0, description="Absolute slack")
    tol_rel: float = Field(
        settings.tol_rel, gt=0.0, description="Slack relative to the local magnitude"
    )
    fd_first_step: float = Field(
        MACHINE_EPS ** (1.0 / 3.0),
        gt=0.0,
        description="First-derivative step factor (times max(1, |x|))",
    )
    fd_second_step: float = Field(
        MACHINE_EPS**0.25,
        gt=0.0,
        description="Second-derivative step factor (times max(1, |x|))",
    )
    separate_grid_n: int = Field(
        settings.separate_grid_n,
        ge=4,
        description="Points per axis, separate convexity",
    )
    growth_epsilon: float = Field(
        settings.growth_epsilon, gt=0.0, description="Anchor point of the growth bound"
    )
    growth_theta_max: float = Field(
        settings.growth_theta_max,
        gt=0.0,
        description="Largest theta of the growth check",
    )

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "example": {
                "grid_min": 1.000001,
                "grid_max": 1000.0,
                "grid_n": 2048,
                "tol_abs": 1e-7,
                "tol_rel": 1e-9,
            }
        },
    }

    @model_validator(mode="after")
    def validate_grid(self) -> "CheckConfig":
        """The t-grid must lie strictly inside (1, inf) and be non-empty."""
        if not 1.0 < self.grid_min < self.grid_max:
            raise ValueError("grid requires 1 < grid_min < grid_max")
        return self

    @classmethod
    def from_settings(cls, config: Optional[Settings] = None) -> "CheckConfig":
        config = config or settings
        return cls(
            grid_min=config.grid_min,
            grid_max=config.grid_max,
            grid_n=config.grid_n,
            tol_abs=config.tol_abs,
            tol_rel=config.tol_rel,
            separate_grid_n=config.separate_grid_n,
            growth_epsilon=config.growth_epsilon,
            growth_theta_max=config.growth_theta_max,
        )


class SampleSpec(BaseModel):
    """Seeded sampling of GL+(2) for the rank-one oracle."""

    n_points: int = Field(settings.oracle_samples, ge=1, description="Sample count")
    seed: int = Field(settings.oracle_seed, description="Base seed")
    lambda_range: Tuple[float, float] = Field(
        (settings.lambda_min, settings.lambda_max),
        description="Range of the log-uniform singular values",
    )
    segment_steps: int = Field(settings.segment_steps, ge=3)
    segment_scale: float = Field(
        settings.segment_scale,
        gt=0.0,
        description="Segment half-length relative to |F|",
    )
    step_scale: float = Field(
        settings.step_scale,
        gt=0.0,
        description="Second-difference step relative to |F|",
    )
    tol: float = Field(settings.oracle_tol, gt=0.0, description="Violation threshold")

    model_config = {"frozen": True}

    @field_validator("lambda_range")
    @classmethod
    def validate_lambda_range(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        """Both ends positive and ordered."""
        lo, hi = v
        if not 0.0 < lo <= hi < float("inf"):
            raise ValueError("lambda_range must satisfy 0 < lo <= hi < inf")
        return v

    @classmethod
    def from_settings(cls, config: Optional[Settings] = None) -> "SampleSpec":
        config = config or settings
        return cls(
            n_points=config.oracle_samples,
            seed=config.oracle_seed,
            lambda_range=(config.lambda_min, config.lambda_max),
            segment_steps=config.segment_steps,
            segment_scale=config.segment_scale,
            step_scale=config.step_scale,
            tol=config.oracle_tol,
        )


class ReprName(str, Enum):
    """Representation named on the command line for expression input."""

    H = "h"
    F = "f"
    FTILDE = "ftilde"
    Z = "z"
    G = "g"
    WVOL = "wvol"


class EnergySelection(BaseModel):
    """
    Either a catalog entry (``zoo`` + ``params``) or an expression
    (``expr`` + ``representation``).
    """

    zoo: Optional[str] = Field(None, description="Catalog name, e.g. 'exp_hencky_iso'")
    params: Dict[str, float] = Field(
        default_factory=dict,
        description="Catalog parameters, or names substituted into the expression",
    )
    expr: Optional[str] = Field(None, description="Expression source, e.g. 'cosh(eta)'")
    representation: Optional[ReprName] = Field(
        None, description="Representation of the expression"
    )

    model_config = {
        "json_schema_extra": {
            "examples": [
                {"zoo": "exp_hencky_iso", "params": {"k": 0.25}},
                {"expr": "exp(eta + sin(eta))", "representation": "ftilde"},
            ]
        }
    }

    @model_validator(mode="after")
    def validate_source(self) -> "EnergySelection":
        """Exactly one source; expressions need a representation."""
        if (self.zoo is None) == (self.expr is None):
            raise ValueError("exactly one of 'zoo' or 'expr' must be given")
        if self.expr is not None and self.representation is None:
            raise ValueError("'representation' is required with 'expr'")
        return self


class CheckRequest(BaseModel):
    """Body of POST /check."""

    energy: EnergySelection
    config: Optional[CheckConfig] = None
    oracle: Optional[SampleSpec] = Field(
        None, description="Run the sampling oracle with these parameters"
    )


class ConvertRequest(BaseModel):
    """Body of POST /convert."""

    energy: EnergySelection
    points: int = Field(16, ge=2, le=10000, description="Rows of the conversion table")
    grid_max: float = Field(settings.grid_max, gt=1.0)


class DistRequest(BaseModel):
    """Body of POST /dist."""

    matrix: List[float] = Field(
        ..., min_length=4, max_length=4, description="Row-major a11, a12, a21, a22"
    )
    what: str = Field("dist", pattern="^(dist|hull|K|invariants)$")


class OracleRequest(BaseModel):
    """Body of POST /oracle."""

    energy: EnergySelection
    spec: SampleSpec = Field(default_factory=SampleSpec.from_settings)
