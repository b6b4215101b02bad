"""
Tests for the energy catalog and its comparison against computed verdicts.
"""

import math

import pytest

from rankone.exceptions import ParamOutOfRangeError, UnknownEnergyError
from rankone.models.energy import registration_rng, sample_matrices
from rankone.models.matrix import Mat2
from rankone.schemas.response import CriterionStatus, Expectation, Overall
from rankone.services import numerics, zoo
from rankone.services.criteria import check_ftilde_criterion
from rankone.services.representations import eval_at_matrix, scalar_forms

MATRICES = sample_matrices(registration_rng(), n=16)

# Entries whose natural representation is an isochoric scalar or g form.
ISOCHORIC = [
    "hencky_iso",
    "exp_hencky_iso",
    "dist_iso_so2",
    "power_k",
    "ex_i",
    "ex_ii",
    "ex_iii",
    "ex_iv",
    "ex_v",
]


# Entries with a C1 ratio form; |dev2 log U|^beta has a kink at t = 1 for beta <= 1.
SMOOTH = [(name, {}) for name in ISOCHORIC if name != "ex_iv"] + [
    ("ex_iv", {"beta": 2.0}),
    ("ex_iv", {"beta": 3.0}),
    ("exp_hencky_full", {}),
]


class TestIsochoricProperties:
    """Structural identities every isochoric catalog energy satisfies."""

    @pytest.mark.parametrize("name, params", SMOOTH)
    def test_ratio_form_is_flat_at_one(self, name, params):
        """h'(1) = 0 for a C1 ratio form."""
        h = scalar_forms(zoo.make(name, params).criteria_energy).h
        slope = numerics.d1_numeric(h, 1.0)
        assert slope == pytest.approx(0.0, abs=1e-6 * max(1.0, abs(h(1.0))))

    @pytest.mark.parametrize("name", ISOCHORIC + ["exp_hencky_full"])
    @pytest.mark.parametrize("t", [1.5, 3.0, 40.0])
    def test_ratio_form_is_inversion_symmetric(self, name, t):
        """h(t) = h(1/t)."""
        h = scalar_forms(zoo.make(name).criteria_energy).h
        assert h(1.0 / t) == pytest.approx(h(t), rel=1e-9, abs=1e-12)

    @pytest.mark.parametrize("name", ISOCHORIC + ["exp_hencky_full"])
    @pytest.mark.parametrize("a", [0.1, 10.0])
    def test_scaling_invariance(self, name, a):
        """W(aF) = W(F) for the isochoric energy."""
        energy = zoo.make(name).criteria_energy
        for F in MATRICES:
            assert eval_at_matrix(energy, F.scale(a)) == pytest.approx(
                eval_at_matrix(energy, F), rel=1e-9, abs=1e-12
            )


class TestMake:
    """Construction and parameter validation."""

    def test_catalog_names(self):
        """Every documented entry is present."""
        assert set(zoo.names()) >= {
            "hencky_iso",
            "exp_hencky_iso",
            "exp_hencky_full",
            "biot",
            "dist_iso_so2",
            "power_k",
            "w_sharp",
            "ex_i",
            "ex_ii",
            "ex_iii",
            "ex_iv",
            "ex_v",
        }
        listings = zoo.catalog()
        assert [item.name for item in listings] == zoo.names()
        assert all(item.citation for item in listings)

    def test_unknown_name(self):
        """Unknown names raise UnknownEnergyError."""
        with pytest.raises(UnknownEnergyError):
            zoo.make("neo_hooke")

    def test_unknown_parameter(self):
        """Parameters an entry does not declare are refused."""
        with pytest.raises(ParamOutOfRangeError, match="no parameter"):
            zoo.make("hencky_iso", {"k": 1.0})

    @pytest.mark.parametrize("value", [0.0, -1.0, math.inf, math.nan])
    def test_parameter_range(self, value):
        """Parameters must be finite and positive."""
        with pytest.raises(ParamOutOfRangeError):
            zoo.make("exp_hencky_iso", {"k": value})

    def test_defaults_are_filled(self):
        """Missing parameters take their defaults."""
        entry = zoo.make("exp_hencky_full", {"k": 0.5})
        assert entry.params == {"mu": 1.0, "kappa": 1.0, "k": 0.5, "khat": 0.25}


class TestEntries:
    """Each representation agrees with the matrix energy."""

    @pytest.mark.parametrize("name", ISOCHORIC)
    def test_representation_matches_matrix(self, name):
        """eval_at_matrix of the natural form equals W(F)."""
        entry = zoo.make(name)
        for F in MATRICES:
            assert eval_at_matrix(entry.energy, F) == pytest.approx(
                entry.matrix_energy(F), rel=1e-9, abs=1e-12
            )

    def test_power_k_at_identity(self):
        """beta = 1 gives h(t) = t + 1/t, so h(1) = 2."""
        h = scalar_forms(zoo.make("power_k", {"beta": 1.0}).energy).h
        assert h(1.0) == pytest.approx(2.0)
        assert h(3.0) == pytest.approx(3.0 + 1.0 / 3.0)

    def test_ex_iv_beta_two_is_hencky(self):
        """|dev2 log U|^2 appears twice in the catalog."""
        ex_iv = zoo.make("ex_iv", {"beta": 2.0})
        hencky = zoo.make("hencky_iso")
        for F in MATRICES:
            assert ex_iv.matrix_energy(F) == pytest.approx(hencky.matrix_energy(F))
        for eta in (0.0, 0.3, 4.0):
            assert ex_iv.energy.scalar(eta) == pytest.approx(hencky.energy.scalar(eta))

    def test_ex_i_ratio_form(self):
        """|Ubar - Ubar^-1|^2 at diag(t, 1) is 2(t + 1/t) - 4."""
        entry = zoo.make("ex_i")
        for t in (1.0, 2.0, 9.0):
            assert entry.matrix_energy(Mat2.diag(t, 1.0)) == pytest.approx(
                entry.energy.scalar(t), abs=1e-12
            )

    def test_split_energy(self):
        """exp_hencky_full = isochoric part + W_vol(det F)."""
        entry = zoo.make("exp_hencky_full")
        iso = zoo.make("exp_hencky_iso")
        for F in MATRICES:
            expected = iso.matrix_energy(F) + entry.volumetric(F.det)
            assert entry.matrix_energy(F) == pytest.approx(expected)
        assert entry.criteria_energy is entry.isochoric_part

    def test_symmetric_forms(self):
        """g(l1, l2) evaluates the energy at diag(l1, l2)."""
        for name in ("hencky_iso", "biot"):
            entry = zoo.make(name)
            F = Mat2.diag(2.5, 0.4)
            assert entry.symmetric(2.5, 0.4) == pytest.approx(entry.matrix_energy(F))

    def test_subjects(self):
        """Entries without an isochoric form always get the oracle."""
        assert not zoo.make("hencky_iso").subject().oracle_required
        for name in ("biot", "w_sharp", "exp_hencky_full", "qc_hull_so2"):
            assert zoo.make(name).subject().oracle_required, name
        assert zoo.make("biot").subject().criteria_energy is None

    @pytest.mark.parametrize(
        "name, params, expected",
        [
            ("exp_hencky_iso", {"k": 0.25}, Expectation.POLYCONVEX),
            ("exp_hencky_iso", {"k": 0.2}, Expectation.NOT_RANK_ONE_CONVEX),
            ("power_k", {"beta": 0.5}, Expectation.NOT_RANK_ONE_CONVEX),
            ("exp_hencky_full", {"khat": 0.1}, None),
            ("w_sharp", {}, Expectation.RANK_ONE_CONVEX),
        ],
    )
    def test_resolved_expectation(self, name, params, expected):
        """CONDITIONAL entries resolve against their parameters."""
        assert zoo.make(name, params).resolved_expectation is expected


class TestCatalogExamples:
    """Known verdicts of the catalog examples."""

    @pytest.mark.parametrize("beta", [1.0, 2.0, 3.0])
    def test_ex_iv_fails(self, fast_cfg, beta):
        """|dev2 log U|^beta is never rank-one convex."""
        ft = zoo.make("ex_iv", {"beta": beta}).energy.scalar
        assert check_ftilde_criterion(ft, fast_cfg).status is CriterionStatus.FAIL

    def test_ex_ii_inequality(self, fast_cfg):
        """The explicit ex_ii inequality holds."""
        assert zoo.ex_ii_inequality(fast_cfg).status is CriterionStatus.PASS


class TestExpectedVsActual:
    """Catalog expectations against full reports."""

    def test_hencky(self, fast_cfg, small_spec):
        """Analytic FAIL and oracle VIOLATION both match."""
        entry = zoo.make("hencky_iso")
        comparison = zoo.expected_vs_actual(entry, fast_cfg, small_spec)
        assert comparison.matches is True
        assert comparison.report.overall is Overall.NOT_RANK_ONE_CONVEX
        assert comparison.report.oracle is not None

    def test_ex_iii(self, fast_cfg, small_spec):
        """cosh(eta) passes every criterion."""
        comparison = zoo.expected_vs_actual(zoo.make("ex_iii"), fast_cfg, small_spec)
        assert comparison.matches is True
        assert comparison.report.overall is Overall.POLYCONVEX_CONSISTENT

    def test_ex_v_witness(self, fast_cfg, small_spec):
        """e^(eta + sin eta) fails at eta = pi/2."""
        comparison = zoo.expected_vs_actual(zoo.make("ex_v"), fast_cfg, small_spec)
        assert comparison.matches is True
        ftilde = next(
            c for c in comparison.report.checks if c.criterion_id == "ftilde"
        )
        assert ftilde.status is CriterionStatus.FAIL
        assert ftilde.witness.point == pytest.approx(math.pi / 2.0, abs=0.2)

    def test_split_below_volumetric_threshold(self, fast_cfg, small_spec):
        """khat < 1/8 fails the sufficient volumetric check only."""
        entry = zoo.make("exp_hencky_full", {"khat": 0.05})
        comparison = zoo.expected_vs_actual(entry, fast_cfg, small_spec)
        volumetric = next(
            c for c in comparison.report.checks if c.criterion_id == "volumetric"
        )
        assert volumetric.status is CriterionStatus.FAIL
        assert comparison.matches is None

    @pytest.mark.slow
    @pytest.mark.parametrize("name", zoo.names())
    def test_whole_catalog(self, name):
        """Every entry at default parameters matches its expectation."""
        comparison = zoo.expected_vs_actual(zoo.make(name))
        assert comparison.matches in (True, None), comparison.report.overall
