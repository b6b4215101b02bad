"""
Catalog of named planar energies with their known verdicts.

Every entry carries its natural representation (ftilde for the Hencky family,
z for powers of the distortion, h for ``ex_i``/``ex_ii``, a matrix function for
the non-isochoric ones) and, separately, a matrix energy built only from the
planar kinematics. The oracle runs on the latter so it stays independent of
the representation machinery.
"""

import logging
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np

from rankone.exceptions import ParamOutOfRangeError, UnknownEnergyError
from rankone.models.energy import (
    FROM_ONE,
    HALF_LINE,
    POSITIVE,
    EnergyRep,
    MatrixFn,
    RepKind,
    ScalarFn,
    SymmetricFn2,
)
from rankone.models.matrix import Mat2
from rankone.schemas.request import CheckConfig, SampleSpec
from rankone.schemas.response import (
    EnergySource,
    Expectation,
    Overall,
    Verdict,
    ZooComparison,
    ZooListing,
)
from rankone.services import criteria
from rankone.services.planar import (
    dev2,
    log_spd,
    polar_u,
    qc_hull_dist_sq_so2,
    w_sharp,
)
from rankone.services.report_service import Subject, check_subject

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZooEntry:
    """
    A catalog energy at concrete parameters.

    Attributes:
        energy: Natural representation.
        matrix_energy: W(F) from planar kinematics, used by the oracle.
        expected: Known verdict; CONDITIONAL entries resolve it through
            ``condition_holds`` and ``expected_if_false``.
        isochoric_part: For split energies, the isochoric part the scalar
            criteria run on.
        volumetric: For split energies, W_vol(det F).
        symmetric: Optional g(l1, l2) for the separate convexity check.
    """

    name: str
    params: Mapping[str, float]
    energy: EnergyRep
    matrix_energy: MatrixFn
    expected: Expectation
    citation: str
    condition: Optional[str] = None
    condition_holds: Optional[bool] = None
    expected_if_false: Optional[Expectation] = None
    isochoric_part: Optional[EnergyRep] = None
    volumetric: Optional[ScalarFn] = None
    symmetric: Optional[SymmetricFn2] = None

    @property
    def resolved_expectation(self) -> Optional[Expectation]:
        """Expected verdict at these params; None when the theory is silent."""
        if self.expected is not Expectation.CONDITIONAL:
            return self.expected
        if self.condition_holds:
            return Expectation.POLYCONVEX
        return self.expected_if_false

    @property
    def criteria_energy(self) -> Optional[EnergyRep]:
        """The isochoric energy the representation criteria apply to."""
        if self.isochoric_part is not None:
            return self.isochoric_part
        if self.energy.kind is RepKind.MATRIX_W and not self.energy.isochoric_declared:
            return None
        return self.energy

    def subject(self) -> Subject:
        """
        What the report runs for this entry.

        Entries the scalar criteria cannot decide on their own (no isochoric
        representation, or a volumetric part) always get the oracle.
        """
        criteria_energy = self.criteria_energy
        return Subject(
            source=EnergySource(
                source="zoo", name_or_src=self.name, params=dict(self.params)
            ),
            representation=self.energy.kind.value,
            criteria_energy=criteria_energy,
            matrix_energy=self.matrix_energy,
            symmetric=self.symmetric,
            volumetric=self.volumetric,
            oracle_required=criteria_energy is None or self.volumetric is not None,
        )

    def listing(self) -> ZooListing:
        return ZooListing(
            name=self.name,
            params=dict(self.params),
            representation=self.energy.kind.value,
            expected=self.expected,
            condition=self.condition,
            citation=self.citation,
        )


# Planar building blocks of the matrix energies.


def dev_log_sq(F: Mat2) -> float:
    """|dev2 log U|^2 via the matrix logarithm of the stretch."""
    return dev2(log_spd(polar_u(F))).frob_sq


def log_sq(F: Mat2) -> float:
    """|log U|^2."""
    return log_spd(polar_u(F)).frob_sq


def biot(F: Mat2) -> float:
    """|U - id|^2."""
    return (polar_u(F) - Mat2.identity()).frob_sq


def distortion_ratio(F: Mat2) -> float:
    """|F|^2 / det F = 2K."""
    return F.frob_sq / F.det


# Entry builders. Each takes validated params.

_Builder = Callable[[Dict[str, float]], ZooEntry]


@dataclass(frozen=True)
class _Recipe:
    defaults: Mapping[str, float]
    build: _Builder
    summary: str


def _hencky_iso(p: Dict[str, float]) -> ZooEntry:
    mu = p["mu"]
    ft = ScalarFn(
        lambda eta: mu * eta,
        HALF_LINE,
        d1=lambda eta: mu,
        d2=lambda eta: 0.0,
        name="hencky_iso",
    )

    def g(x: float, y: float) -> float:
        gap = math.log(x) - math.log(y)
        return 0.5 * mu * gap * gap

    return ZooEntry(
        name="hencky_iso",
        params=p,
        energy=EnergyRep(RepKind.STRAIN_FTILDE, ft, name="hencky_iso"),
        matrix_energy=lambda F: mu * dev_log_sq(F),
        expected=Expectation.NOT_RANK_ONE_CONVEX,
        citation="quadratic isochoric Hencky energy: neither polyconvex nor "
        "rank-one convex (criterion fails for eta > 1/2)",
        symmetric=SymmetricFn2(g, name="hencky_iso.g"),
    )


def _exp_hencky_ftilde(mu: float, k: float, name: str) -> ScalarFn:
    return ScalarFn(
        lambda eta: mu / k * math.exp(k * eta),
        HALF_LINE,
        d1=lambda eta: mu * math.exp(k * eta),
        d2=lambda eta: mu * k * math.exp(k * eta),
        name=name,
    )


def _exp_hencky_iso(p: Dict[str, float]) -> ZooEntry:
    mu, k = p["mu"], p["k"]
    ft = _exp_hencky_ftilde(mu, k, "exp_hencky_iso")
    return ZooEntry(
        name="exp_hencky_iso",
        params=p,
        energy=EnergyRep(RepKind.STRAIN_FTILDE, ft, name="exp_hencky_iso"),
        matrix_energy=lambda F: mu / k * math.exp(k * dev_log_sq(F)),
        expected=Expectation.CONDITIONAL,
        condition="k >= 1/4",
        condition_holds=k >= 0.25,
        expected_if_false=Expectation.NOT_RANK_ONE_CONVEX,
        citation="isochoric exponentiated Hencky energy: polyconvex and rank-one "
        "convex if and only if k >= 1/4",
    )


def volumetric_exp_hencky(kappa: float, khat: float) -> ScalarFn:
    """
    W_vol(s) = kappa/(2 khat) e^(khat log^2 s).

    With L = log s: W_vol'' = W_vol (2 khat / s^2)(1 - L + 2 khat L^2), which is
    non-negative for all s iff khat >= 1/8.
    """
    scale = kappa / (2.0 * khat)

    def value(s: float) -> float:
        log_s = math.log(s)
        return scale * math.exp(khat * log_s * log_s)

    def d1(s: float) -> float:
        log_s = math.log(s)
        return value(s) * 2.0 * khat * log_s / s

    def d2(s: float) -> float:
        log_s = math.log(s)
        shape = 1.0 - log_s + 2.0 * khat * log_s * log_s
        return value(s) * 2.0 * khat * shape / (s * s)

    return ScalarFn(value, POSITIVE, d1=d1, d2=d2, name="exp_hencky_full.vol")


def _exp_hencky_full(p: Dict[str, float]) -> ZooEntry:
    mu, kappa, k, khat = p["mu"], p["kappa"], p["k"], p["khat"]
    wvol = volumetric_exp_hencky(kappa, khat)
    iso = EnergyRep(
        RepKind.STRAIN_FTILDE,
        _exp_hencky_ftilde(mu, k, "exp_hencky_full.iso"),
        name="exp_hencky_full.iso",
    )

    def W(F: Mat2) -> float:
        return mu / k * math.exp(k * dev_log_sq(F)) + wvol(F.det)

    return ZooEntry(
        name="exp_hencky_full",
        params=p,
        energy=EnergyRep(
            RepKind.MATRIX_W, W, isochoric_declared=False, name="exp_hencky_full"
        ),
        matrix_energy=W,
        expected=Expectation.CONDITIONAL,
        condition="k >= 1/4 and khat >= 1/8",
        condition_holds=k >= 0.25 and khat >= 0.125,
        citation="full exponentiated Hencky energy: polyconvex for k >= 1/4 "
        "and khat >= 1/8",
        isochoric_part=iso,
        volumetric=wvol,
    )


def _biot(p: Dict[str, float]) -> ZooEntry:
    mu = p["mu"]

    def g(x: float, y: float) -> float:
        return mu * ((x - 1.0) ** 2 + (y - 1.0) ** 2)

    return ZooEntry(
        name="biot",
        params=p,
        energy=EnergyRep(
            RepKind.MATRIX_W,
            lambda F: mu * biot(F),
            isochoric_declared=False,
            name="biot",
        ),
        matrix_energy=lambda F: mu * biot(F),
        expected=Expectation.NOT_RANK_ONE_CONVEX,
        citation="Biot energy |U - id|^2 is not rank-one convex",
        symmetric=SymmetricFn2(g, name="biot.g"),
    )


def _dist_iso_so2(p: Dict[str, float]) -> ZooEntry:
    mu = p["mu"]

    def z(r: float) -> float:
        u = math.sqrt(2.0 * r + 2.0)
        return mu * ((u - 1.0) ** 2 - 1.0)

    def d1(r: float) -> float:
        return mu * (2.0 - 2.0 / math.sqrt(2.0 * r + 2.0))

    def d2(r: float) -> float:
        return mu * 2.0 / math.sqrt(2.0 * r + 2.0) ** 3

    def W(F: Mat2) -> float:
        return mu * ((math.sqrt(distortion_ratio(F) + 2.0) - 1.0) ** 2 - 1.0)

    return ZooEntry(
        name="dist_iso_so2",
        params=p,
        energy=EnergyRep(
            RepKind.DISTORTION_Z,
            ScalarFn(z, FROM_ONE, d1=d1, d2=d2, name="dist_iso_so2"),
            name="dist_iso_so2",
        ),
        matrix_energy=W,
        expected=Expectation.POLYCONVEX,
        citation="squared Euclidean distance of F/sqrt(det F) to SO(2) is polyconvex",
    )


def _power_k(p: Dict[str, float]) -> ZooEntry:
    mu, beta = p["mu"], p["beta"]

    def z(r: float) -> float:
        return mu * (2.0 * r) ** beta

    def d1(r: float) -> float:
        return mu * 2.0 * beta * (2.0 * r) ** (beta - 1.0)

    def d2(r: float) -> float:
        return mu * 4.0 * beta * (beta - 1.0) * (2.0 * r) ** (beta - 2.0)

    return ZooEntry(
        name="power_k",
        params=p,
        energy=EnergyRep(
            RepKind.DISTORTION_Z,
            ScalarFn(z, FROM_ONE, d1=d1, d2=d2, name="power_k"),
            name="power_k",
        ),
        matrix_energy=lambda F: mu * distortion_ratio(F) ** beta,
        expected=Expectation.CONDITIONAL,
        condition="beta >= 1",
        condition_holds=beta >= 1.0,
        expected_if_false=Expectation.NOT_RANK_ONE_CONVEX,
        citation="(|F|^2/det F)^beta is polyconvex if and only if beta >= 1",
    )


def _w_sharp(p: Dict[str, float]) -> ZooEntry:
    return ZooEntry(
        name="w_sharp",
        params=p,
        energy=EnergyRep(
            RepKind.MATRIX_W, w_sharp, isochoric_declared=False, name="w_sharp"
        ),
        matrix_energy=w_sharp,
        expected=Expectation.RANK_ONE_CONVEX,
        citation="two-branch energy -4 det F / 2(lmax - lmin) - 1: rank-one convex, "
        "quasiconvexity at F = 0 open",
    )


def _ex_i(p: Dict[str, float]) -> ZooEntry:
    mu = p["mu"]
    h = ScalarFn(
        lambda t: mu * (2.0 * (t + 1.0 / t) - 4.0),
        POSITIVE,
        d1=lambda t: mu * 2.0 * (1.0 - 1.0 / (t * t)),
        d2=lambda t: mu * 4.0 / (t * t * t),
        name="ex_i",
    )

    def W(F: Mat2) -> float:
        U = polar_u(F)
        Ubar = U.scale(1.0 / math.sqrt(U.det))
        return mu * (Ubar - Ubar.inverse()).frob_sq

    return ZooEntry(
        name="ex_i",
        params=p,
        energy=EnergyRep(RepKind.RATIO_H, h, name="ex_i"),
        matrix_energy=W,
        expected=Expectation.POLYCONVEX,
        citation="|Ubar - Ubar^-1|^2 with h(t) = 2(t + 1/t) - 4, h'' = 4/t^3",
    )


def _ex_ii(p: Dict[str, float]) -> ZooEntry:
    mu = p["mu"]

    def h(t: float) -> float:
        log_t = math.log(t)
        return mu * math.exp(0.5 * log_t * log_t) * (t + 1.0 / t)

    def d1(t: float) -> float:
        log_t = math.log(t)
        inv2 = 1.0 / (t * t)
        growth = mu * math.exp(0.5 * log_t * log_t)
        return growth * (1.0 - inv2 + log_t * (1.0 + inv2))

    def d2(t: float) -> float:
        log_t = math.log(t)
        inv1 = 1.0 / t
        inv3 = inv1 * inv1 * inv1
        growth = mu * math.exp(0.5 * log_t * log_t)
        return growth * (
            inv1
            + 3.0 * inv3
            + (inv1 - 3.0 * inv3) * log_t
            + (inv1 + inv3) * log_t * log_t
        )

    return ZooEntry(
        name="ex_ii",
        params=p,
        energy=EnergyRep(
            RepKind.RATIO_H,
            ScalarFn(h, POSITIVE, d1=d1, d2=d2, name="ex_ii"),
            name="ex_ii",
        ),
        matrix_energy=lambda F: mu * math.exp(dev_log_sq(F)) * distortion_ratio(F),
        expected=Expectation.POLYCONVEX,
        citation="e^(|dev2 log U|^2) |F|^2/det F",
    )


def _ex_iii(p: Dict[str, float]) -> ZooEntry:
    mu = p["mu"]
    ft = ScalarFn(
        lambda eta: mu * math.cosh(eta),
        HALF_LINE,
        d1=lambda eta: mu * math.sinh(eta),
        d2=lambda eta: mu * math.cosh(eta),
        name="ex_iii",
    )
    return ZooEntry(
        name="ex_iii",
        params=p,
        energy=EnergyRep(RepKind.STRAIN_FTILDE, ft, name="ex_iii"),
        matrix_energy=lambda F: mu * math.cosh(dev_log_sq(F)),
        expected=Expectation.POLYCONVEX,
        citation="cosh(|dev2 log U|^2)",
    )


def _ex_iv(p: Dict[str, float]) -> ZooEntry:
    mu, beta = p["mu"], p["beta"]
    half = 0.5 * beta
    ft = ScalarFn(
        lambda eta: mu * eta**half,
        HALF_LINE,
        d1=lambda eta: mu * half * eta ** (half - 1.0),
        d2=lambda eta: mu * half * (half - 1.0) * eta ** (half - 2.0),
        name="ex_iv",
    )
    return ZooEntry(
        name="ex_iv",
        params=p,
        energy=EnergyRep(RepKind.STRAIN_FTILDE, ft, name="ex_iv"),
        matrix_energy=lambda F: mu * dev_log_sq(F) ** half,
        expected=Expectation.NOT_RANK_ONE_CONVEX,
        citation="|dev2 log U|^beta: not rank-one convex for any beta > 0",
    )


def _ex_v(p: Dict[str, float]) -> ZooEntry:
    mu = p["mu"]

    def value(eta: float) -> float:
        return mu * math.exp(eta + math.sin(eta))

    def d2(eta: float) -> float:
        slope = 1.0 + math.cos(eta)
        return value(eta) * (slope * slope - math.sin(eta))

    ft = ScalarFn(
        value,
        HALF_LINE,
        d1=lambda eta: value(eta) * (1.0 + math.cos(eta)),
        d2=d2,
        name="ex_v",
    )

    def W(F: Mat2) -> float:
        eta = dev_log_sq(F)
        return mu * math.exp(eta + math.sin(eta))

    return ZooEntry(
        name="ex_v",
        params=p,
        energy=EnergyRep(RepKind.STRAIN_FTILDE, ft, name="ex_v"),
        matrix_energy=W,
        expected=Expectation.NOT_RANK_ONE_CONVEX,
        citation="e^(eta + sin eta): criterion not satisfied at eta = pi/2",
    )


def _geodesic_sq(p: Dict[str, float]) -> ZooEntry:
    mu = p["mu"]
    return ZooEntry(
        name="geodesic_sq",
        params=p,
        energy=EnergyRep(
            RepKind.MATRIX_W,
            lambda F: mu * log_sq(F),
            isochoric_declared=False,
            name="geodesic_sq",
        ),
        matrix_energy=lambda F: mu * log_sq(F),
        expected=Expectation.NOT_RANK_ONE_CONVEX,
        citation="|log U|^2, squared geodesic distance to SO(2): not rank-one convex",
    )


def _qc_hull_so2(p: Dict[str, float]) -> ZooEntry:
    mu = p["mu"]
    return ZooEntry(
        name="qc_hull_so2",
        params=p,
        energy=EnergyRep(
            RepKind.MATRIX_W,
            lambda F: mu * qc_hull_dist_sq_so2(F),
            isochoric_declared=False,
            name="qc_hull_so2",
        ),
        matrix_energy=lambda F: mu * qc_hull_dist_sq_so2(F),
        expected=Expectation.POLYCONVEX,
        citation="quasiconvex hull of dist^2(., SO(2)): a convex function plus "
        "the Null-Lagrangian -2 det F",
    )


_MU = {"mu": 1.0}

CATALOG: Mapping[str, _Recipe] = MappingProxyType(
    {
        "hencky_iso": _Recipe(_MU, _hencky_iso, "|dev2 log U|^2"),
        "exp_hencky_iso": _Recipe(
            {"mu": 1.0, "k": 1.0}, _exp_hencky_iso, "e^(k |dev2 log U|^2)"
        ),
        "exp_hencky_full": _Recipe(
            {"mu": 1.0, "kappa": 1.0, "k": 1.0, "khat": 0.25},
            _exp_hencky_full,
            "isochoric plus volumetric exponentiated Hencky",
        ),
        "biot": _Recipe(_MU, _biot, "|U - id|^2"),
        "dist_iso_so2": _Recipe(_MU, _dist_iso_so2, "dist^2(F/sqrt(det F), SO(2))"),
        "power_k": _Recipe({"mu": 1.0, "beta": 1.0}, _power_k, "(|F|^2/det F)^beta"),
        "w_sharp": _Recipe({}, _w_sharp, "two-branch energy on R^2x2"),
        "ex_i": _Recipe(_MU, _ex_i, "|Ubar - Ubar^-1|^2"),
        "ex_ii": _Recipe(_MU, _ex_ii, "e^(|dev2 log U|^2) |F|^2/det F"),
        "ex_iii": _Recipe(_MU, _ex_iii, "cosh(|dev2 log U|^2)"),
        "ex_iv": _Recipe({"mu": 1.0, "beta": 1.0}, _ex_iv, "|dev2 log U|^beta"),
        "ex_v": _Recipe(_MU, _ex_v, "e^(eta + sin eta)"),
        "geodesic_sq": _Recipe(_MU, _geodesic_sq, "|log U|^2"),
        "qc_hull_so2": _Recipe(_MU, _qc_hull_so2, "qc hull of dist^2(., SO(2))"),
    }
)


def _validate(name: str, given: Mapping[str, float]) -> Dict[str, float]:
    defaults = CATALOG[name].defaults
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        raise ParamOutOfRangeError(
            f"{name} has no parameter(s) {', '.join(unknown)};"
            f" known: {', '.join(sorted(defaults)) or 'none'}"
        )
    params = {**defaults, **{key: float(v) for key, v in given.items()}}
    for key, value in params.items():
        if not (math.isfinite(value) and value > 0.0):
            raise ParamOutOfRangeError(f"{name}: {key} must be > 0, got {value!r}")
    return params


def make(name: str, params: Optional[Mapping[str, float]] = None) -> ZooEntry:
    """
    Build a catalog entry.

    Raises:
        UnknownEnergyError: If ``name`` is not in the catalog.
        ParamOutOfRangeError: For unknown keys or non-positive values.
    """
    if name not in CATALOG:
        raise UnknownEnergyError(name)
    validated = _validate(name, params or {})
    entry = CATALOG[name].build(validated)
    logger.debug("built zoo entry %s with %s", name, validated)
    return entry


def names() -> List[str]:
    return list(CATALOG)


def catalog() -> List[ZooListing]:
    """Listing of every entry at default parameters."""
    return [make(name).listing() for name in CATALOG]


def ex_ii_inequality(cfg: Optional[CheckConfig] = None) -> Verdict:
    """
    (3/t^2 - 1) log t <= 1 + 3/t^2 + (1 + 1/t^2) log^2 t on the t-grid.

    This is the ex_ii convexity condition h''(t) t e^(-log^2 t / 2) >= 0
    written out; the verdict's value is right side minus left side.
    """
    cfg = cfg if cfg is not None else CheckConfig.from_settings()
    t = criteria.MatchedGrids.build(cfg).t
    log_t = np.log(t)
    inv2 = 1.0 / (t * t)
    left = (3.0 * inv2 - 1.0) * log_t
    right = 1.0 + 3.0 * inv2 + (1.0 + inv2) * log_t * log_t
    samples = criteria.GridSamples(
        values=list(right - left),
        scales=list(np.abs(left) + np.abs(right)),
        errors=[0.0] * len(t),
    )
    return criteria.grid_verdict("ex_ii_inequality", "t", t, samples, cfg)


def expected_vs_actual(
    entry: ZooEntry,
    cfg: Optional[CheckConfig] = None,
    spec: Optional[SampleSpec] = None,
) -> ZooComparison:
    """
    Run the applicable criteria and the oracle and compare to the catalog.

    A positive expectation matches any overall other than NOT_RANK_ONE_CONVEX
    (tangent parameters may come out INCONCLUSIVE); a negative expectation
    needs NOT_RANK_ONE_CONVEX.
    """
    spec = spec if spec is not None else SampleSpec.from_settings()
    report = check_subject(entry.subject(), cfg, spec)
    expectation = entry.resolved_expectation
    matches: Optional[bool] = None
    if expectation is Expectation.NOT_RANK_ONE_CONVEX:
        matches = report.overall is Overall.NOT_RANK_ONE_CONVEX
    elif expectation is not None:
        matches = report.overall is not Overall.NOT_RANK_ONE_CONVEX
    if matches is False:
        logger.warning(
            "%s: expected %s, got %s", entry.name, expectation, report.overall.value
        )
    return ZooComparison(
        name=entry.name,
        params=dict(entry.params),
        expected=entry.expected,
        condition=entry.condition,
        condition_holds=entry.condition_holds,
        report=report,
        matches=matches,
    )
