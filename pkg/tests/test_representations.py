"""
Tests for energy representations, conversions and registration checks.
"""

import math

import pytest
from hypothesis import given, settings

from rankone.exceptions import (
    DomainError,
    NonPositiveDeterminantError,
    NotIsochoricError,
    RegistrationError,
)
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
from rankone.services import zoo
from rankone.services.planar import distortion_k
from rankone.services.representations import (
    eval_at_matrix,
    f_from_ftilde,
    f_from_h,
    ftilde_from_f,
    h_from_f,
    h_from_g,
    h_from_matrix,
    h_from_z,
    scalar_forms,
    symmetrized_ratio,
    z_from_h,
)
from tests.conftest import glp2

LOG2 = math.log(2.0)


def hencky_h() -> ScalarFn:
    return ScalarFn(lambda t: 0.5 * math.log(t) ** 2, POSITIVE, name="hencky")


class TestRegistration:
    """Construction-time property checks."""

    def test_ratio_form_must_be_symmetric(self):
        """h(t) = t is not a ratio form."""
        with pytest.raises(RegistrationError):
            EnergyRep(RepKind.RATIO_H, ScalarFn(lambda t: t, POSITIVE, name="t"))

    def test_symmetric_g_must_be_symmetric(self):
        """l1 - l2 fails the symmetry check."""
        with pytest.raises(RegistrationError):
            SymmetricFn2(lambda x, y: x - y, name="antisymmetric")

    def test_scalar_must_be_finite(self):
        """log is not finite at the closed end of [0, inf)."""
        with pytest.raises(RegistrationError):
            ScalarFn(math.log, HALF_LINE, name="log")

    def test_declared_isochoric_matrix_is_checked(self):
        """|F|^2 is not isochoric."""
        with pytest.raises(NotIsochoricError):
            EnergyRep(RepKind.MATRIX_W, lambda F: F.frob_sq, name="frob")

    def test_domain_is_enforced(self):
        """Evaluating outside the domain raises DomainError."""
        z = ScalarFn(lambda r: r, FROM_ONE, name="z")
        with pytest.raises(DomainError):
            z(0.5)


class TestConversions:
    """Exact conversions between the representations."""

    def test_h_from_matrix(self):
        """Hencky, zero and K energies in h-form."""
        entry = zoo.make("hencky_iso")
        W = EnergyRep(RepKind.MATRIX_W, entry.matrix_energy, name="hencky")
        assert h_from_matrix(W).scalar(2.0) == pytest.approx(0.5 * LOG2**2)
        zero = EnergyRep(RepKind.MATRIX_W, lambda F: 0.0, name="zero")
        assert h_from_matrix(zero).scalar(7.0) == 0.0
        K = EnergyRep(RepKind.MATRIX_W, distortion_k, name="K")
        h = h_from_matrix(K).scalar
        assert h(1.0) == 1.0
        assert h(3.0) == pytest.approx((3.0 + 1.0 / 3.0) / 2.0)

    def test_h_from_matrix_refuses_undeclared(self):
        """A matrix energy not declared isochoric has no ratio form."""
        W = EnergyRep(
            RepKind.MATRIX_W, lambda F: F.frob_sq, isochoric_declared=False, name="W"
        )
        with pytest.raises(NotIsochoricError):
            h_from_matrix(W)

    def test_h_from_g(self):
        """Three symmetric functions reduced to h."""
        ratio = h_from_g(SymmetricFn2(lambda x, y: x / y + y / x)).scalar
        assert ratio(3.0) == pytest.approx(3.0 + 1.0 / 3.0)
        volumetric = h_from_g(SymmetricFn2(lambda x, y: (x * y) ** 5)).scalar
        assert volumetric(9.0) == pytest.approx(1.0)
        op = h_from_g(SymmetricFn2(lambda x, y: max(x * x, y * y) / (x * y))).scalar
        assert op(4.0) == pytest.approx(4.0)
        assert op(0.25) == pytest.approx(4.0)

    def test_f_and_ftilde_from_h(self):
        """Hencky h gives f = theta/2 and ftilde = eta."""
        f = f_from_h(hencky_h())
        assert f(3.0) == pytest.approx(1.5)
        assert f(0.0) == 0.0
        ft = ftilde_from_f(f)
        assert ft(0.8) == pytest.approx(0.8)

    def test_exponentiated_forms(self):
        """h = e^((k/2) log^2 t) maps to f = e^(k theta/2), ftilde = e^(k eta)."""
        k = 0.3
        h = ScalarFn(lambda t: math.exp(0.5 * k * math.log(t) ** 2), POSITIVE)
        f = f_from_h(h)
        ft = ftilde_from_f(f)
        for x in (0.1, 1.0, 4.0):
            assert f(x) == pytest.approx(math.exp(0.5 * k * x), rel=1e-12)
            assert ft(x) == pytest.approx(math.exp(k * x), rel=1e-12)

    def test_z_from_h(self):
        """z inverts K on [1, inf)."""
        op = ScalarFn(lambda t: max(t, 1.0 / t), POSITIVE, name="op")
        z = z_from_h(op)
        assert z(1.25) == pytest.approx(2.0)
        assert z(1.0) == 1.0
        mean = z_from_h(ScalarFn(lambda t: 0.5 * (t + 1.0 / t), POSITIVE))
        for r in (1.0, 1.3, 10.0, 400.0):
            assert mean(r) == pytest.approx(r, rel=1e-12)

    def test_constant_stays_constant(self):
        """h = c gives constant f, ftilde and z."""
        c = ScalarFn(lambda t: 3.5, POSITIVE, d1=lambda t: 0.0, d2=lambda t: 0.0)
        f = f_from_h(c)
        assert {f(0.0), ftilde_from_f(f)(2.0), z_from_h(c)(5.0)} == {3.5}

    def test_inverse_conversions_round_trip(self):
        """h -> f -> h and z -> h agree with the source."""
        h = hencky_h()
        back = h_from_f(f_from_h(h))
        for t in (1.5, 2.0, 40.0):
            assert back(t) == pytest.approx(h(t), rel=1e-12)
        z = ScalarFn(lambda r: 2.0 * r, FROM_ONE, d1=lambda r: 2.0, d2=lambda r: 0.0)
        assert h_from_z(z)(1.0) == pytest.approx(2.0)
        assert h_from_z(z)(2.0) == pytest.approx(2.5)

    def test_chain_rule_derivatives(self):
        """Registered derivatives survive ftilde -> f -> h."""
        ft = ScalarFn(
            lambda e: math.exp(e), HALF_LINE, d1=math.exp, d2=math.exp, name="ft"
        )
        f = f_from_ftilde(ft)
        assert f.derivative(1, 2.0) == pytest.approx(0.5 * math.e)
        h = h_from_f(f)
        t = 3.0
        L = math.log(t)
        # h(t) = exp(L^2 / 2): h' = L/t h, h'' = (L^2 + 1 - L)/t^2 h.
        value = math.exp(0.5 * L * L)
        assert h.derivative(1, t) == pytest.approx(L / t * value, rel=1e-12)
        assert h.derivative(2, t) == pytest.approx(
            (L * L + 1.0 - L) / (t * t) * value, rel=1e-12
        )

    def test_symmetrized_ratio(self):
        """A t-form given on [1, inf) is extended by h(t) = h(1/t)."""
        phi = ScalarFn(lambda t: t - 1.0, POSITIVE, d1=lambda t: 1.0, d2=lambda t: 0.0)
        h = symmetrized_ratio(phi)
        assert h(4.0) == h(0.25) == pytest.approx(3.0)
        # d/dt phi(1/t) = -1/t^2 for t < 1.
        assert h.derivative(1, 0.5) == pytest.approx(-4.0)
        assert h.derivative(2, 0.5) == pytest.approx(16.0)


class TestEvalAtMatrix:
    """Evaluation of any representation at F."""

    def test_examples(self):
        """h at diag(2, 1), z = 2r at diag(2, 1), conformal F."""
        F = Mat2.diag(2.0, 1.0)
        h = EnergyRep(RepKind.RATIO_H, symmetrized_ratio(hencky_h()))
        assert eval_at_matrix(h, F) == pytest.approx(0.5 * LOG2**2)
        z = EnergyRep(RepKind.DISTORTION_Z, ScalarFn(lambda r: 2.0 * r, FROM_ONE))
        assert eval_at_matrix(z, F) == pytest.approx(2.5)
        assert eval_at_matrix(z, Mat2.rotation(0.3).scale(4.0)) == pytest.approx(2.0)

    def test_requires_positive_determinant(self):
        """F with det F <= 0 is refused."""
        z = EnergyRep(RepKind.DISTORTION_Z, ScalarFn(lambda r: r, FROM_ONE))
        with pytest.raises(NonPositiveDeterminantError):
            eval_at_matrix(z, Mat2.diag(-1.0, 1.0))

    @given(glp2())
    @settings(max_examples=100, deadline=None)
    def test_all_forms_agree(self, F):
        """Every scalar form of a zoo energy gives the same W(F)."""
        entry = zoo.make("ex_ii")
        forms = scalar_forms(entry.energy)
        expected = entry.matrix_energy(F)
        for kind, payload in (
            (RepKind.RATIO_H, forms.h),
            (RepKind.LOGSQ_F, forms.f),
            (RepKind.STRAIN_FTILDE, forms.ftilde),
            (RepKind.DISTORTION_Z, forms.z),
        ):
            value = eval_at_matrix(EnergyRep(kind, payload), F)
            assert value == pytest.approx(expected, rel=1e-9)

    @given(glp2())
    @settings(max_examples=100, deadline=None)
    def test_tension_compression_symmetry(self, F):
        """W(F^-1) = W(F) for isochoric representations."""
        for name in ("exp_hencky_iso", "ex_i", "dist_iso_so2"):
            energy = zoo.make(name).energy
            assert eval_at_matrix(energy, F.inverse()) == pytest.approx(
                eval_at_matrix(energy, F), rel=1e-9
            )

    @given(glp2())
    @settings(max_examples=100, deadline=None)
    def test_conformal_invariance(self, F):
        """W(a Q1 F Q2) = W(F)."""
        energy = zoo.make("ex_iii").energy
        G = Mat2.rotation(0.4) @ F.scale(3.7) @ Mat2.rotation(-2.1)
        assert eval_at_matrix(energy, G) == pytest.approx(
            eval_at_matrix(energy, F), rel=1e-9
        )
