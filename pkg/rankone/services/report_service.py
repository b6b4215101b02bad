"""
Report assembly: runs every applicable criterion and the oracle for one
energy and aggregates them into an overall verdict.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from rankone.config import settings
from rankone.exceptions import NotIsochoricError
from rankone.models.energy import EnergyRep, MatrixFn, ScalarFn, SymmetricFn2
from rankone.models.matrix import Mat2
from rankone.schemas.request import CheckConfig, SampleSpec
from rankone.schemas.response import (
    ConfigEcho,
    ConversionRow,
    CriterionStatus,
    EnergySource,
    OracleReport,
    OracleStatus,
    Overall,
    Report,
    Verdict,
)
from rankone.services import criteria
from rankone.services.oracle import run_oracle
from rankone.services.planar import (
    distortion_k,
    dist_euclid_sq_so2,
    qc_hull_dist_sq_so2,
    svd2,
)
from rankone.services.representations import scalar_forms

logger = logging.getLogger(__name__)

# Criteria that are sufficient but not necessary: a FAIL only makes the
# overall verdict inconclusive.
SUFFICIENT_ONLY = frozenset({"volumetric"})


@dataclass(frozen=True)
class Subject:
    """
    Everything the report needs to know about one energy.

    Attributes:
        criteria_energy: Isochoric representation for the scalar criteria, or
            None when they do not apply.
        matrix_energy: W(F) for the oracle, or None.
        oracle_required: Run the oracle even without an explicit request,
            because the scalar criteria cannot decide this energy.
    """

    source: EnergySource
    representation: str
    criteria_energy: Optional[EnergyRep] = None
    matrix_energy: Optional[MatrixFn] = None
    symmetric: Optional[SymmetricFn2] = None
    volumetric: Optional[ScalarFn] = None
    oracle_required: bool = False


def overall_verdict(
    checks: Sequence[Verdict], oracle: Optional[OracleReport] = None
) -> Overall:
    """
    NOT_RANK_ONE_CONVEX if a necessary criterion fails or the oracle finds a
    violation; POLYCONVEX_CONSISTENT if everything passes; else INCONCLUSIVE.
    """
    necessary = [c for c in checks if c.criterion_id not in SUFFICIENT_ONLY]
    if oracle is not None and oracle.status is OracleStatus.VIOLATION:
        return Overall.NOT_RANK_ONE_CONVEX
    if criteria.worst(necessary) is CriterionStatus.FAIL:
        return Overall.NOT_RANK_ONE_CONVEX
    if all(c.status is CriterionStatus.PASS for c in checks):
        return Overall.POLYCONVEX_CONSISTENT
    return Overall.INCONCLUSIVE


def check_subject(
    subject: Subject,
    cfg: Optional[CheckConfig] = None,
    spec: Optional[SampleSpec] = None,
) -> Report:
    """
    Run all applicable checks for ``subject``.

    The oracle runs when ``spec`` is given, or with the default sampling when
    the subject requires it.
    """
    cfg = cfg if cfg is not None else CheckConfig.from_settings()
    checks: List[Verdict] = []
    if subject.criteria_energy is not None:
        forms = scalar_forms(subject.criteria_energy)
        checks.extend(criteria.check_scalar_forms(forms, cfg))
    if subject.symmetric is not None:
        checks.append(criteria.check_separate_convexity(subject.symmetric, cfg))
    if subject.volumetric is not None:
        checks.append(criteria.check_volumetric_convexity(subject.volumetric, cfg))

    oracle: Optional[OracleReport] = None
    if subject.matrix_energy is not None and (
        spec is not None or subject.oracle_required
    ):
        spec = spec if spec is not None else SampleSpec.from_settings()
        oracle = run_oracle(subject.matrix_energy, spec)
    else:
        spec = None

    overall = overall_verdict(checks, oracle)
    logger.info(
        "checked %s (%d criteria, oracle %s): %s",
        subject.source.name_or_src,
        len(checks),
        "off" if oracle is None else oracle.status.value,
        overall.value,
    )
    return Report(
        tool_version=settings.app_version,
        energy=subject.source,
        representation=subject.representation,
        checks=checks,
        oracle=oracle,
        config=ConfigEcho(check=cfg, oracle=spec),
        overall=overall,
    )


def exit_code(overall: Overall) -> int:
    """0 consistent, 1 not rank-one convex, 2 inconclusive."""
    return {
        Overall.POLYCONVEX_CONSISTENT: 0,
        Overall.NOT_RANK_ONE_CONVEX: 1,
        Overall.INCONCLUSIVE: 2,
    }[overall]


def conversion_rows(
    subject: Subject, points: int, grid_max: float
) -> List[ConversionRow]:
    """
    Values of the four scalar forms on matched grids.

    Row i uses t_i log-spaced on [1, grid_max] and its images theta = log^2 t,
    eta = theta/2, r = (t + 1/t)/2, so every row repeats one value four times.

    Raises:
        NotIsochoricError: If the subject has no isochoric representation.
    """
    if subject.criteria_energy is None:
        raise NotIsochoricError(
            f"{subject.source.name_or_src} has no scalar representation"
        )
    forms = scalar_forms(subject.criteria_energy)
    rows: List[ConversionRow] = []
    for raw in np.geomspace(1.0, grid_max, points):
        t = float(raw)
        log_t = math.log(t)
        theta = log_t * log_t
        r = max(0.5 * (t + 1.0 / t), 1.0)
        rows.append(
            ConversionRow(
                t=t,
                h=forms.h(t),
                theta=theta,
                f=forms.f(theta),
                eta=0.5 * theta,
                ftilde=forms.ftilde(0.5 * theta),
                r=r,
                z=forms.z(r),
            )
        )
    return rows


def dist_values(F: Mat2, what: str) -> Dict[str, float]:
    """
    Distance quantities of one matrix.

    ``dist`` and ``hull`` accept any F; ``K`` and ``invariants`` need det F > 0.
    """
    if what == "dist":
        return {"dist_sq": dist_euclid_sq_so2(F)}
    if what == "hull":
        return {"hull": qc_hull_dist_sq_so2(F)}
    if what == "K":
        return {"K": distortion_k(F)}
    if what == "invariants":
        pair = svd2(F)
        t = pair.ratio
        theta = math.log(t) ** 2
        return {
            "lambda1": pair.lambda1,
            "lambda2": pair.lambda2,
            "t": t,
            "theta": theta,
            "eta": 0.5 * theta,
            "K": distortion_k(F),
        }
    raise ValueError(f"unknown quantity {what!r}; use dist, hull, K or invariants")
