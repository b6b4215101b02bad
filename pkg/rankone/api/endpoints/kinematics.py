"""
API endpoints for representation conversion and planar distance functions.
"""

from typing import List

from fastapi import APIRouter

from rankone.models.matrix import Mat2
from rankone.schemas.request import ConvertRequest, DistRequest
from rankone.schemas.response import ConversionRow, DistResponse
from rankone.services.report_service import conversion_rows, dist_values
from rankone.services.selection import resolve

router = APIRouter(tags=["kinematics"])


@router.post(
    "/convert",
    response_model=List[ConversionRow],
    summary="Tabulate the scalar forms",
    description="h, f, ftilde and z of one energy on matched grids",
)
def convert_energy(request: ConvertRequest) -> List[ConversionRow]:
    subject = resolve(request.energy)
    return conversion_rows(subject, request.points, request.grid_max)


@router.post(
    "/dist",
    response_model=DistResponse,
    summary="Distance functions of a matrix",
)
def matrix_distances(request: DistRequest) -> DistResponse:
    """
    dist^2 to SO(2), its quasiconvex hull, the distortion K or the full set
    of invariants of one matrix.
    """
    F = Mat2.from_entries(request.matrix)
    return DistResponse(what=request.what, values=dist_values(F, request.what))
