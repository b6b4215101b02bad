"""
Grid-based criteria for polyconvexity and rank-one convexity.

Each check samples a pointwise criterion on a log-spaced grid and reduces it
to a ``Verdict``. The theta, eta and r grids are images of one t-grid, so the
h-, f-, ftilde- and z-criteria of an energy see the same deformations.

Decision rule, per grid point with criterion value v, local scale s (sum of
the absolute criterion terms) and noise n = err + tol_rel * s:

* FAIL if some v < -(tol_abs + n)
* INCONCLUSIVE if otherwise some v < -n
* PASS otherwise

The error estimate err widens both bands beyond tol_abs + tol_rel * s, so a
non-PASS verdict reports its threshold tol_abs + n at the witness as
``tolerance``; an INCONCLUSIVE min_margin lies in [-tolerance, 0).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from rankone.models.energy import POSITIVE, ScalarFn, SymmetricFn2
from rankone.schemas.request import CheckConfig
from rankone.schemas.response import (
    CriterionStatus,
    GridSummary,
    GrowthBound,
    Verdict,
    Witness,
)
from rankone.services import numerics
from rankone.services.numerics import Estimate
from rankone.services.representations import ScalarForms

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

# Relative margins closer than this to the minimum count as ties.
WITNESS_TIE = 1e-12

_SEVERITY = {
    CriterionStatus.PASS: 0,
    CriterionStatus.INCONCLUSIVE: 1,
    CriterionStatus.FAIL: 2,
}


def _default(cfg: Optional[CheckConfig]) -> CheckConfig:
    return cfg if cfg is not None else CheckConfig.from_settings()


def d1_numeric(fn: ScalarFn, x: float, cfg: Optional[CheckConfig] = None) -> float:
    """First derivative, analytic if registered, else Richardson-extrapolated."""
    return numerics.d1_numeric(fn, x, _default(cfg).fd_first_step)


def d2_numeric(fn: ScalarFn, x: float, cfg: Optional[CheckConfig] = None) -> float:
    """Second derivative, analytic if registered, else Richardson-extrapolated."""
    return numerics.d2_numeric(fn, x, _default(cfg).fd_second_step)


def _d1(fn: ScalarFn, x: float, cfg: CheckConfig) -> Estimate:
    return numerics.d1_estimate(fn, x, cfg.fd_first_step)


def _d2(fn: ScalarFn, x: float, cfg: CheckConfig) -> Estimate:
    return numerics.d2_estimate(fn, x, cfg.fd_second_step)


@dataclass(frozen=True)
class MatchedGrids:
    """The t-grid and its images theta = log^2 t, eta = theta/2, r = (t+1/t)/2."""

    t: FloatArray
    theta: FloatArray
    eta: FloatArray
    r: FloatArray

    @classmethod
    def build(cls, cfg: CheckConfig) -> "MatchedGrids":
        t = np.geomspace(cfg.grid_min, cfg.grid_max, cfg.grid_n)
        log_t = np.log(t)
        theta = log_t * log_t
        r = np.maximum(0.5 * (t + 1.0 / t), 1.0)
        return cls(t=t, theta=theta, eta=0.5 * theta, r=r)


@dataclass
class GridSamples:
    """Criterion values with their scales and error bounds along a grid."""

    values: List[float]
    scales: List[float]
    errors: List[float]

    @classmethod
    def empty(cls) -> "GridSamples":
        return cls([], [], [])

    def add(self, value: float, scale: float, error: float) -> None:
        self.values.append(value)
        self.scales.append(scale)
        self.errors.append(error)


def _first_run(mask: NDArray[np.bool_]) -> slice:
    """Index range of the first contiguous run of True in ``mask``."""
    hits = np.flatnonzero(mask)
    start = int(hits[0])
    stop = start
    while stop < mask.size and mask[stop]:
        stop += 1
    return slice(start, stop)


def grid_verdict(
    criterion_id: str,
    variable: str,
    points: Sequence[float],
    samples: GridSamples,
    cfg: CheckConfig,
    second_points: Optional[Sequence[float]] = None,
    grid: Optional[GridSummary] = None,
) -> Verdict:
    values = np.asarray(samples.values)
    scales = np.asarray(samples.scales)
    noise = np.asarray(samples.errors) + cfg.tol_rel * scales
    failing = values < -(cfg.tol_abs + noise)
    doubtful = values < -noise

    witness = None
    tolerance = None
    if failing.any():
        status = CriterionStatus.FAIL
        run = _first_run(failing)
        safe = np.where(scales > 0.0, scales, 1.0)
        relative = np.where(scales > 0.0, values / safe, values)[run]
        # Earliest point within rounding of the most negative ratio.
        near_min = relative <= relative.min() + WITNESS_TIE
        index = run.start + int(np.flatnonzero(near_min)[0])
    elif doubtful.any():
        status = CriterionStatus.INCONCLUSIVE
        index = int(np.argmin(values))
    else:
        status = CriterionStatus.PASS
        index = -1
    if index >= 0:
        tolerance = float(cfg.tol_abs + noise[index])
        witness = Witness(
            point=float(points[index]),
            value=float(values[index]),
            variable=variable,
            second_point=None if second_points is None else float(second_points[index]),
        )

    min_margin = float(values.min())
    if grid is None:
        grid = GridSummary(
            variable=variable, lo=float(points[0]), hi=float(points[-1]), n=len(points)
        )
    logger.debug(
        "criterion %s: %s, min margin %.3e on %d points",
        criterion_id,
        status.value,
        min_margin,
        grid.n,
    )
    return Verdict(
        criterion_id=criterion_id,
        status=status,
        witness=witness,
        min_margin=min_margin,
        tolerance=tolerance,
        grid_used=grid,
    )


def worst(verdicts: Sequence[Verdict]) -> CriterionStatus:
    """The most severe status among ``verdicts`` (PASS if empty)."""
    return max(
        (v.status for v in verdicts),
        key=_SEVERITY.__getitem__,
        default=CriterionStatus.PASS,
    )


def _two_term(
    points: FloatArray,
    fn: ScalarFn,
    cfg: CheckConfig,
    weights: Callable[[float], Tuple[float, float]],
) -> GridSamples:
    """Criterion a(x) fn''(x) + b(x) fn'(x) with (a, b) = weights(x)."""
    samples = GridSamples.empty()
    for raw in points:
        x = float(raw)
        a, b = weights(x)
        second = _d2(fn, x, cfg)
        first = _d1(fn, x, cfg)
        curvature = a * second.value
        slope = b * first.value
        samples.add(
            curvature + slope,
            abs(curvature) + abs(slope),
            abs(a) * second.error + abs(b) * first.error,
        )
    return samples


def _single(
    points: FloatArray, fn: ScalarFn, cfg: CheckConfig, order: int
) -> GridSamples:
    samples = GridSamples.empty()
    estimate = _d2 if order == 2 else _d1
    for x in points:
        est = estimate(fn, float(x), cfg)
        samples.add(est.value, abs(est.value), est.error)
    return samples


def check_h_criterion(h: ScalarFn, cfg: Optional[CheckConfig] = None) -> Verdict:
    """
    h convex and non-decreasing on (1, grid_max].

    Both conditions are reported as components ("h.convex", "h.monotone");
    the verdict takes the worse status and the witness of that component.
    """
    cfg = _default(cfg)
    t = MatchedGrids.build(cfg).t
    convex = grid_verdict("h.convex", "t", t, _single(t, h, cfg, 2), cfg)
    monotone = grid_verdict("h.monotone", "t", t, _single(t, h, cfg, 1), cfg)
    components = [convex, monotone]
    status = worst(components)
    decisive = next(c for c in components if c.status is status)
    return Verdict(
        criterion_id="h",
        status=status,
        witness=decisive.witness,
        min_margin=min(convex.min_margin, monotone.min_margin),
        tolerance=decisive.tolerance,
        grid_used=convex.grid_used,
        components=components,
    )


def check_h_convex_rplus(h: ScalarFn, cfg: Optional[CheckConfig] = None) -> Verdict:
    """h'' >= 0 on the symmetric grid [1/grid_max, grid_max]."""
    cfg = _default(cfg)
    s = np.geomspace(1.0 / cfg.grid_max, cfg.grid_max, cfg.grid_n)
    return grid_verdict("h_convex_rplus", "t", s, _single(s, h, cfg, 2), cfg)


def check_f_criterion(f: ScalarFn, cfg: Optional[CheckConfig] = None) -> Verdict:
    """2 theta f''(theta) + (1 - sqrt(theta)) f'(theta) >= 0."""
    cfg = _default(cfg)
    theta = MatchedGrids.build(cfg).theta

    def weights(x: float) -> Tuple[float, float]:
        return 2.0 * x, 1.0 - math.sqrt(x)

    return grid_verdict("f", "theta", theta, _two_term(theta, f, cfg, weights), cfg)


def check_ftilde_criterion(ft: ScalarFn, cfg: Optional[CheckConfig] = None) -> Verdict:
    """2 eta ftilde''(eta) + (1 - sqrt(2 eta)) ftilde'(eta) >= 0."""
    cfg = _default(cfg)
    eta = MatchedGrids.build(cfg).eta

    def weights(x: float) -> Tuple[float, float]:
        return 2.0 * x, 1.0 - math.sqrt(2.0 * x)

    return grid_verdict("ftilde", "eta", eta, _two_term(eta, ft, cfg, weights), cfg)


def check_z_criterion(z: ScalarFn, cfg: Optional[CheckConfig] = None) -> Verdict:
    """(r^2 - 1)(r + sqrt(r^2 - 1)) z''(r) + z'(r) >= 0."""
    cfg = _default(cfg)
    r = MatchedGrids.build(cfg).r

    def weights(x: float) -> Tuple[float, float]:
        gap = (x - 1.0) * (x + 1.0)
        return gap * (x + math.sqrt(gap)), 1.0

    return grid_verdict("z", "r", r, _two_term(r, z, cfg, weights), cfg)


def check_separate_convexity(
    g: SymmetricFn2, cfg: Optional[CheckConfig] = None
) -> Verdict:
    """
    x -> g(x, y) convex for every y on a 2-D log grid.

    The grid spans [1/sqrt(grid_max), sqrt(grid_max)] on both axes; convexity
    in the second argument follows from the symmetry of g. A PASS is only a
    necessary condition for rank-one convexity.
    """
    cfg = _default(cfg)
    root = math.sqrt(cfg.grid_max)
    axis = np.geomspace(1.0 / root, root, cfg.separate_grid_n)
    xs: List[float] = []
    ys: List[float] = []
    samples = GridSamples.empty()
    for raw in axis:
        y = float(raw)
        section = ScalarFn(
            lambda x, y=y: g(x, y),
            POSITIVE,
            name=f"{g.name}(., {y:g})",
            register=False,
        )
        for x in axis:
            est = _d2(section, float(x), cfg)
            samples.add(est.value, abs(est.value), est.error)
            xs.append(float(x))
            ys.append(y)
    grid = GridSummary(
        variable="l1", lo=float(axis[0]), hi=float(axis[-1]), n=len(xs)
    )
    return grid_verdict(
        "separate_convexity", "l1", xs, samples, cfg, second_points=ys, grid=grid
    )


def check_f_monotone(f: ScalarFn, cfg: Optional[CheckConfig] = None) -> Verdict:
    """f'(theta) >= 0 on the theta-grid."""
    cfg = _default(cfg)
    theta = MatchedGrids.build(cfg).theta
    return grid_verdict("f_monotone", "theta", theta, _single(theta, f, cfg, 1), cfg)


def growth_bound(f: ScalarFn, cfg: Optional[CheckConfig] = None) -> GrowthBound:
    """
    Constants of f(theta) >= c1 e^sqrt(theta) + c2 on [eps, inf).

    c1 = f'(eps) sqrt(eps) e^-sqrt(eps) and c2 = f(eps) - c1 e^sqrt(eps);
    with eps = 1 this is c1 = f'(1)/e.

    The bound comes from integrating the f-criterion upwards from eps, so it
    only holds for theta >= eps. Anchoring c2 at theta = 0 instead, as
    c2 = f(0) - f'(1)/e, is not implied by the criterion: cosh(theta/2)
    satisfies the f-criterion and still falls below that bound near theta = 1.
    """
    cfg = _default(cfg)
    eps = cfg.growth_epsilon
    root = math.sqrt(eps)
    c1 = _d1(f, eps, cfg).value * root * math.exp(-root)
    return GrowthBound(c1=c1, c2=f(eps) - c1 * math.exp(root), epsilon=eps)


def check_growth_bound(f: ScalarFn, cfg: Optional[CheckConfig] = None) -> Verdict:
    """
    f(theta) >= c1 e^sqrt(theta) + c2 for theta in [eps, theta_max].

    theta_max is the larger of the theta-grid end and ``growth_theta_max``.
    """
    cfg = _default(cfg)
    bound = growth_bound(f, cfg)
    eps = bound.epsilon
    root_eps = math.sqrt(eps)
    slope_error = _d1(f, eps, cfg).error * root_eps * math.exp(-root_eps)
    theta_max = max(math.log(cfg.grid_max) ** 2, cfg.growth_theta_max, 2.0 * eps)
    theta = np.geomspace(eps, theta_max, cfg.grid_n)
    samples = GridSamples.empty()
    for x in theta:
        value = f(float(x))
        exp_root = math.exp(math.sqrt(float(x)))
        lower = bound.c1 * exp_root + bound.c2
        samples.add(
            value - lower,
            abs(value) + abs(bound.c1) * exp_root + abs(bound.c2),
            slope_error * abs(exp_root - math.exp(root_eps)),
        )
    verdict = grid_verdict("growth", "theta", theta, samples, cfg)
    return verdict.model_copy(update={"bound": bound})


def check_volumetric_convexity(
    wvol: ScalarFn, cfg: Optional[CheckConfig] = None
) -> Verdict:
    """wvol''(s) >= 0 on [1/grid_max, grid_max]."""
    cfg = _default(cfg)
    s = np.geomspace(1.0 / cfg.grid_max, cfg.grid_max, cfg.grid_n)
    return grid_verdict("volumetric", "s", s, _single(s, wvol, cfg, 2), cfg)


def check_scalar_forms(
    forms: ScalarForms, cfg: Optional[CheckConfig] = None
) -> List[Verdict]:
    """Every criterion that applies to an isochoric energy, in report order."""
    cfg = _default(cfg)
    return [
        check_h_criterion(forms.h, cfg),
        check_h_convex_rplus(forms.h, cfg),
        check_f_criterion(forms.f, cfg),
        check_ftilde_criterion(forms.ftilde, cfg),
        check_z_criterion(forms.z, cfg),
        check_f_monotone(forms.f, cfg),
        check_growth_bound(forms.f, cfg),
    ]
