"""
Conversions between the six energy representations.

Conversions are lazy compositions of the source callable; nothing is sampled
or interpolated. Where the source carries analytic derivatives and the chain
rule is regular on the whole target domain (f <-> ftilde, f -> h, z -> h) the
converted form carries analytic derivatives too; otherwise the criteria fall
back to finite differences.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

from rankone.exceptions import NonPositiveDeterminantError, NotIsochoricError
from rankone.models.energy import (
    FROM_ONE,
    HALF_LINE,
    POSITIVE,
    EnergyRep,
    RepKind,
    ScalarFn,
    SymmetricFn2,
)
from rankone.models.matrix import Mat2
from rankone.services.planar import distortion_k, invariants, svd2

logger = logging.getLogger(__name__)


def _distortion_of_ratio(t: float) -> float:
    """r = (t + 1/t)/2, clamped to [1, inf) against rounding."""
    return max(0.5 * (t + 1.0 / t), 1.0)


def _ratio_of_distortion(r: float) -> float:
    """Inverse of ``_distortion_of_ratio`` on [1, inf)."""
    return r + math.sqrt((r - 1.0) * (r + 1.0))


def h_from_matrix(W: EnergyRep) -> EnergyRep:
    """
    h(t) = W(diag(t, 1)) for an isochoric matrix energy.

    Raises:
        NotIsochoricError: If W is not declared isochoric. Declared energies
            were already scaling-checked when the EnergyRep was built.
    """
    if W.kind is not RepKind.MATRIX_W:
        raise TypeError(f"h_from_matrix needs a MatrixW energy, got {W.kind.value}")
    if not W.isochoric_declared:
        raise NotIsochoricError(f"{W.name} is not isochoric; no ratio form exists")
    matrix_fn = W.matrix_fn
    h = ScalarFn(lambda t: matrix_fn(Mat2.diag(t, 1.0)), POSITIVE, name=f"{W.name}.h")
    return EnergyRep(RepKind.RATIO_H, h, name=W.name)


def h_from_g(g: SymmetricFn2, name: Optional[str] = None) -> EnergyRep:
    """h(t) = g(sqrt t, 1/sqrt t)."""

    def h_fn(t: float) -> float:
        root = math.sqrt(t)
        return g(root, 1.0 / root)

    label = name or g.name
    return EnergyRep(
        RepKind.RATIO_H, ScalarFn(h_fn, POSITIVE, name=f"{label}.h"), name=label
    )


def symmetrized_ratio(phi: ScalarFn) -> ScalarFn:
    """
    h(t) = phi(max(t, 1/t)).

    Only the values of phi on [1, inf) are used, so any function given for
    t >= 1 extends to a ratio form with h(t) = h(1/t) exactly.
    """

    def d1(t: float) -> float:
        if t >= 1.0:
            return phi.analytic_derivative(1, t)
        s = 1.0 / t
        return -phi.analytic_derivative(1, s) * s * s

    def d2(t: float) -> float:
        if t >= 1.0:
            return phi.analytic_derivative(2, t)
        s = 1.0 / t
        s2 = s * s
        curvature = phi.analytic_derivative(2, s) * s2 * s2
        return curvature + 2.0 * phi.analytic_derivative(1, s) * s2 * s

    exact = phi.has_analytic
    return ScalarFn(
        lambda t: phi(max(t, 1.0 / t)),
        POSITIVE,
        d1=d1 if exact else None,
        d2=d2 if exact else None,
        name=phi.name,
    )


def f_from_h(h: ScalarFn) -> ScalarFn:
    """f(theta) = h(e^sqrt(theta)) on [0, inf); f(0) = h(1)."""
    return ScalarFn(
        lambda theta: h(math.exp(math.sqrt(theta))), HALF_LINE, name=_rename(h, "f")
    )


def ftilde_from_f(f: ScalarFn) -> ScalarFn:
    """ftilde(eta) = f(2 eta); ftilde' = 2 f', ftilde'' = 4 f''."""

    def d1(eta: float) -> float:
        return 2.0 * f.analytic_derivative(1, 2.0 * eta)

    def d2(eta: float) -> float:
        return 4.0 * f.analytic_derivative(2, 2.0 * eta)

    exact = f.has_analytic
    return ScalarFn(
        lambda eta: f(2.0 * eta),
        HALF_LINE,
        d1=d1 if exact else None,
        d2=d2 if exact else None,
        name=_rename(f, "ftilde"),
    )


def f_from_ftilde(ft: ScalarFn) -> ScalarFn:
    """f(theta) = ftilde(theta / 2)."""

    def d1(theta: float) -> float:
        return 0.5 * ft.analytic_derivative(1, 0.5 * theta)

    def d2(theta: float) -> float:
        return 0.25 * ft.analytic_derivative(2, 0.5 * theta)

    exact = ft.has_analytic
    return ScalarFn(
        lambda theta: ft(0.5 * theta),
        HALF_LINE,
        d1=d1 if exact else None,
        d2=d2 if exact else None,
        name=_rename(ft, "f"),
    )


def z_from_h(h: ScalarFn) -> ScalarFn:
    """z(r) = h(r + sqrt(r^2 - 1)) on [1, inf); z(1) = h(1)."""
    return ScalarFn(
        lambda r: h(_ratio_of_distortion(r)), FROM_ONE, name=_rename(h, "z")
    )


def h_from_f(f: ScalarFn) -> ScalarFn:
    """
    h(t) = f(log^2 t).

    With L = log t: h' = 2 L f'/t and h'' = (2/t^2)(2 L^2 f'' + (1 - L) f').
    """

    def d1(t: float) -> float:
        log_t = math.log(t)
        return 2.0 * log_t * f.analytic_derivative(1, log_t * log_t) / t

    def d2(t: float) -> float:
        log_t = math.log(t)
        theta = log_t * log_t
        inner = 2.0 * theta * f.analytic_derivative(2, theta)
        inner += (1.0 - log_t) * f.analytic_derivative(1, theta)
        return 2.0 * inner / (t * t)

    def h_fn(t: float) -> float:
        log_t = math.log(t)
        return f(log_t * log_t)

    exact = f.has_analytic
    return ScalarFn(
        h_fn,
        POSITIVE,
        d1=d1 if exact else None,
        d2=d2 if exact else None,
        name=_rename(f, "h"),
    )


def h_from_ftilde(ft: ScalarFn) -> ScalarFn:
    """h(t) = ftilde(log^2(t) / 2)."""
    return h_from_f(f_from_ftilde(ft))


def h_from_z(z: ScalarFn) -> ScalarFn:
    """
    h(t) = z((t + 1/t)/2).

    With p(t) = (t + 1/t)/2: p' = (1 - 1/t^2)/2 and p'' = 1/t^3.
    """

    def d1(t: float) -> float:
        slope = 0.5 * (1.0 - 1.0 / (t * t))
        return z.analytic_derivative(1, _distortion_of_ratio(t)) * slope

    def d2(t: float) -> float:
        r = _distortion_of_ratio(t)
        slope = 0.5 * (1.0 - 1.0 / (t * t))
        curvature = z.analytic_derivative(2, r) * slope * slope
        return curvature + z.analytic_derivative(1, r) / (t * t * t)

    exact = z.has_analytic
    return ScalarFn(
        lambda t: z(_distortion_of_ratio(t)),
        POSITIVE,
        d1=d1 if exact else None,
        d2=d2 if exact else None,
        name=_rename(z, "h"),
    )


def _rename(fn: ScalarFn, form: str) -> str:
    base, _, _ = fn.name.rpartition(".")
    return f"{base or fn.name}.{form}"


def ratio_form(E: EnergyRep) -> ScalarFn:
    """The h-form of any isochoric representation."""
    if E.kind is RepKind.MATRIX_W:
        return h_from_matrix(E).scalar
    if E.kind is RepKind.SYMMETRIC_G:
        return h_from_g(E.symmetric, E.name).scalar
    if E.kind is RepKind.RATIO_H:
        return E.scalar
    if E.kind is RepKind.LOGSQ_F:
        return h_from_f(E.scalar)
    if E.kind is RepKind.STRAIN_FTILDE:
        return h_from_ftilde(E.scalar)
    return h_from_z(E.scalar)


@dataclass(frozen=True)
class ScalarForms:
    """The four scalar forms of one isochoric energy."""

    h: ScalarFn
    f: ScalarFn
    ftilde: ScalarFn
    z: ScalarFn


def scalar_forms(E: EnergyRep) -> ScalarForms:
    """
    All scalar forms of ``E``, each derived from the natural one.

    The payload itself is kept for its own kind; the others are compositions
    of it, so an energy given in ftilde-form keeps its analytic derivatives in
    f- and h-form.

    Raises:
        NotIsochoricError: For matrix energies not declared isochoric.
    """
    if E.kind is RepKind.LOGSQ_F:
        f = E.scalar
        h = h_from_f(f)
        return ScalarForms(h=h, f=f, ftilde=ftilde_from_f(f), z=z_from_h(h))
    if E.kind is RepKind.STRAIN_FTILDE:
        ft = E.scalar
        h = h_from_ftilde(ft)
        return ScalarForms(h=h, f=f_from_ftilde(ft), ftilde=ft, z=z_from_h(h))
    if E.kind is RepKind.DISTORTION_Z:
        z = E.scalar
        h = h_from_z(z)
        f = f_from_h(h)
        return ScalarForms(h=h, f=f, ftilde=ftilde_from_f(f), z=z)
    h = ratio_form(E)
    f = f_from_h(h)
    return ScalarForms(h=h, f=f, ftilde=ftilde_from_f(f), z=z_from_h(h))


def eval_at_matrix(E: EnergyRep, F: Mat2) -> float:
    """
    Evaluate any representation at F in GL+(2).

    Raises:
        NonPositiveDeterminantError: If det F <= 0.
        DomainError: If the derived invariant is outside the payload domain.
    """
    if not F.det > 0.0:
        raise NonPositiveDeterminantError(F.det)
    if E.kind is RepKind.MATRIX_W:
        return float(E.matrix_fn(F))
    if E.kind is RepKind.SYMMETRIC_G:
        pair = svd2(F)
        return E.symmetric(pair.lambda1, pair.lambda2)
    if E.kind is RepKind.DISTORTION_Z:
        return E.scalar(distortion_k(F))
    inv = invariants(F)
    if E.kind is RepKind.RATIO_H:
        return E.scalar(inv.t)
    if E.kind is RepKind.LOGSQ_F:
        return E.scalar(inv.theta)
    return E.scalar(inv.eta)
