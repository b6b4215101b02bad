"""
API endpoints for convexity checks, the sampling oracle and the catalog.
"""

from typing import List

from fastapi import APIRouter

from rankone.exceptions import RankOneError
from rankone.schemas.request import CheckConfig, CheckRequest, OracleRequest
from rankone.schemas.response import OracleReport, Report, ZooListing
from rankone.services import zoo
from rankone.services.oracle import run_oracle
from rankone.services.report_service import check_subject
from rankone.services.selection import resolve

router = APIRouter(tags=["checks"])


@router.post(
    "/check",
    response_model=Report,
    summary="Check an energy",
    description="Runs every applicable criterion and, if requested, the oracle",
)
def check_energy(request: CheckRequest) -> Report:
    """
    Check a catalog energy or an expression.

    Energies the scalar criteria cannot decide (non-isochoric ones) get the
    oracle with default sampling even when ``oracle`` is omitted.
    """
    cfg = request.config or CheckConfig.from_settings()
    return check_subject(resolve(request.energy), cfg, request.oracle)


@router.post(
    "/oracle",
    response_model=OracleReport,
    summary="Run the sampling oracle",
)
def run_sampling_oracle(request: OracleRequest) -> OracleReport:
    """Seeded search for rank-one convexity violations."""
    subject = resolve(request.energy)
    if subject.matrix_energy is None:
        raise RankOneError(f"{subject.source.name_or_src} has no matrix energy")
    return run_oracle(subject.matrix_energy, request.spec)


@router.get(
    "/zoo",
    response_model=List[ZooListing],
    summary="List the energy catalog",
)
def list_zoo() -> List[ZooListing]:
    """Every catalog entry at default parameters with its known verdict."""
    return zoo.catalog()
