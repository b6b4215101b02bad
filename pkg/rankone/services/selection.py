"""
Turns an EnergySelection (catalog name or expression) into a report Subject.
"""

import logging
from functools import partial

from rankone.exceptions import NotIsochoricError
from rankone.models.energy import (
    EnergyRep,
    RepKind,
    ScalarFn,
    SymmetricFn2,
    check_isochoric,
)
from rankone.models.matrix import Mat2
from rankone.schemas.request import EnergySelection, ReprName
from rankone.schemas.response import EnergySource
from rankone.services import expr_parser, zoo
from rankone.services.report_service import Subject
from rankone.services.representations import eval_at_matrix, symmetrized_ratio

logger = logging.getLogger(__name__)

SCALAR_KINDS = {
    ReprName.H: RepKind.RATIO_H,
    ReprName.F: RepKind.LOGSQ_F,
    ReprName.FTILDE: RepKind.STRAIN_FTILDE,
    ReprName.Z: RepKind.DISTORTION_Z,
}


def resolve(selection: EnergySelection) -> Subject:
    """
    Build the Subject for ``selection``.

    Raises:
        UnknownEnergyError, ParamOutOfRangeError: For catalog selections.
        ExprError: For expressions that do not parse.
        RegistrationError: If a g-expression is not symmetric.
    """
    if selection.zoo is not None:
        return zoo.make(selection.zoo, selection.params).subject()
    assert selection.expr is not None and selection.representation is not None
    return _expression_subject(
        selection.expr, selection.representation, selection.params
    )


def _volumetric(fn: ScalarFn, F: Mat2) -> float:
    return fn(F.det)


def _expression_subject(
    src: str, representation: ReprName, params: dict
) -> Subject:
    expanded = expr_parser.substitute(src, params)
    variables = expr_parser.VARIABLE_SETS[representation.value]
    fn = expr_parser.to_scalar_fn(expr_parser.parse(expanded, variables), name=src)
    source = EnergySource(source="expr", name_or_src=src, params=dict(params))

    if representation is ReprName.WVOL:
        assert isinstance(fn, ScalarFn)
        return Subject(
            source=source,
            representation="wvol",
            matrix_energy=partial(_volumetric, fn),
            volumetric=fn,
        )

    if representation is ReprName.G:
        assert isinstance(fn, SymmetricFn2)
        energy = EnergyRep(RepKind.SYMMETRIC_G, fn, name=src)
        matrix_energy = partial(eval_at_matrix, energy)
        try:
            check_isochoric(matrix_energy, src)
        except NotIsochoricError as exc:
            logger.info("%s; scalar criteria skipped, oracle enabled", exc)
            return Subject(
                source=source,
                representation=RepKind.SYMMETRIC_G.value,
                matrix_energy=matrix_energy,
                symmetric=fn,
                oracle_required=True,
            )
        return Subject(
            source=source,
            representation=RepKind.SYMMETRIC_G.value,
            criteria_energy=energy,
            matrix_energy=matrix_energy,
            symmetric=fn,
        )

    assert isinstance(fn, ScalarFn)
    kind = SCALAR_KINDS[representation]
    # The t-form is given on t >= 1 and extended by h(t) = h(1/t).
    payload = symmetrized_ratio(fn) if kind is RepKind.RATIO_H else fn
    energy = EnergyRep(kind, payload, name=src)
    return Subject(
        source=source,
        representation=kind.value,
        criteria_energy=energy,
        matrix_energy=partial(eval_at_matrix, energy),
    )
