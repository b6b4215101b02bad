"""
Response schemas: verdicts, oracle reports and the aggregated check report.

Field names are frozen in ``report.schema.json`` next to this module.
"""

from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from rankone.schemas.request import CheckConfig, SampleSpec


class CriterionStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


class Witness(BaseModel):
    """Grid point where a criterion is most clearly violated."""

    point: float = Field(..., description="Grid coordinate of the violation")
    value: float = Field(..., description="Criterion value at the point")
    variable: str = Field(..., description="Name of the grid variable")
    second_point: Optional[float] = Field(
        None, description="Second coordinate for two-variable criteria"
    )

    model_config = {"frozen": True}


class GridSummary(BaseModel):
    """The grid a verdict was computed on."""

    variable: str
    lo: float
    hi: float
    n: int

    model_config = {"frozen": True}


class GrowthBound(BaseModel):
    """f(theta) >= c1 e^sqrt(theta) + c2 for theta >= epsilon."""

    c1: float
    c2: float
    epsilon: float

    model_config = {"frozen": True}


class Verdict(BaseModel):
    """Outcome of one criterion on one grid."""

    criterion_id: str = Field(..., description="Criterion identifier, e.g. 'ftilde'")
    status: CriterionStatus
    witness: Optional[Witness] = None
    min_margin: float = Field(..., description="Smallest criterion value observed")
    tolerance: Optional[float] = Field(
        None,
        description="FAIL threshold at the witness: tol_abs + err + tol_rel * scale",
    )
    grid_used: GridSummary
    components: List["Verdict"] = Field(
        default_factory=list, description="Sub-verdicts, worst one decides status"
    )
    bound: Optional[GrowthBound] = Field(
        None, description="Constants of the growth check"
    )

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "example": {
                "criterion_id": "ftilde",
                "status": "FAIL",
                "witness": {"point": 2.0, "value": -0.005, "variable": "eta"},
                "min_margin": -0.005,
                "grid_used": {"variable": "eta", "lo": 5e-13, "hi": 23.86, "n": 2048},
            }
        },
    }


Verdict.model_rebuild()


class OracleStatus(str, Enum):
    CONSISTENT_CONVEX = "CONSISTENT_CONVEX"
    VIOLATION = "VIOLATION"


class Violation(BaseModel):
    """A rank-one direction along which the energy is not convex."""

    F: Tuple[float, float, float, float] = Field(
        ..., description="Row-major a11, a12, a21, a22"
    )
    xi: Tuple[float, float]
    eta: Tuple[float, float]
    second_difference: float
    sample_index: int = Field(..., ge=0)
    test: Literal["lh", "segment"] = Field(
        ..., description="Which test found it: central second difference or segment"
    )

    model_config = {"frozen": True}


class OracleReport(BaseModel):
    """Result of the sampling oracle. It can certify violations only."""

    status: OracleStatus
    violation: Optional[Violation] = None
    points_tested: int = Field(..., ge=0)
    points_skipped: int = Field(0, ge=0, description="Degenerate stencils")

    model_config = {"frozen": True}


class Overall(str, Enum):
    POLYCONVEX_CONSISTENT = "POLYCONVEX_CONSISTENT"
    NOT_RANK_ONE_CONVEX = "NOT_RANK_ONE_CONVEX"
    INCONCLUSIVE = "INCONCLUSIVE"


class EnergySource(BaseModel):
    source: Literal["zoo", "expr"]
    name_or_src: str
    params: Dict[str, float] = Field(default_factory=dict)


class ConfigEcho(BaseModel):
    check: CheckConfig
    oracle: Optional[SampleSpec] = None


class Report(BaseModel):
    """Aggregated verdict for one energy."""

    tool_version: str
    energy: EnergySource
    representation: str = Field(..., description="Natural representation kind")
    checks: List[Verdict]
    oracle: Optional[OracleReport] = None
    config: ConfigEcho
    overall: Overall


class Expectation(str, Enum):
    POLYCONVEX = "POLYCONVEX"
    RANK_ONE_CONVEX = "RANK_ONE_CONVEX"
    NOT_RANK_ONE_CONVEX = "NOT_RANK_ONE_CONVEX"
    CONDITIONAL = "CONDITIONAL"


class ZooComparison(BaseModel):
    """A catalog entry's expected verdict against the computed one."""

    name: str
    params: Dict[str, float]
    expected: Expectation
    condition: Optional[str] = None
    condition_holds: Optional[bool] = Field(
        None, description="Condition evaluated at the given params; None if undecided"
    )
    report: Report
    matches: Optional[bool] = Field(
        None, description="None when the expectation does not determine a verdict"
    )


class ZooListing(BaseModel):
    name: str
    params: Dict[str, float]
    representation: str
    expected: Expectation
    condition: Optional[str] = None
    citation: str


class ConversionRow(BaseModel):
    """One row of the matched conversion grid."""

    t: float
    h: float
    theta: float
    f: float
    eta: float
    ftilde: float
    r: float
    z: float


class DistResponse(BaseModel):
    what: str
    values: Dict[str, float]


class ErrorResponse(BaseModel):
    """Error response body."""

    detail: str = Field(..., description="Error message")
    error_type: Optional[str] = Field(None, description="Error type")

    model_config = {
        "json_schema_extra": {
            "example": {
                "detail": "determinant must be positive, got -1.0",
                "error_type": "NonPositiveDeterminantError",
            }
        }
    }
