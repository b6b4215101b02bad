"""
Sampling oracle for rank-one convexity on GL+(2).

Works on matrix energies directly and does not use the representation
machinery. Sample i draws F, xi and eta from its own generator
``default_rng([seed, i])`` so any single sample can be reproduced without
replaying the ones before it.

The oracle can only find violations. A clean run is reported as
CONSISTENT_CONVEX, never as a proof of convexity.
"""

import logging
import math
import sys
from typing import Callable, Tuple

import numpy as np

from rankone.exceptions import DegenerateStencilError, NonPositiveDeterminantError
from rankone.models.matrix import Mat2, Vec2
from rankone.schemas.request import SampleSpec
from rankone.schemas.response import OracleReport, OracleStatus, Violation

logger = logging.getLogger(__name__)

MatrixFn = Callable[[Mat2], float]

EPS = sys.float_info.epsilon
# Rounding allowance of a three-point second difference, in units of eps.
ROUNDING_FACTOR = 64.0
MAX_HALVINGS = 3
# Fraction of the distance to a root of det(F + u xi(x)eta) kept by segments.
ROOT_MARGIN = 0.95


def _rng(spec: SampleSpec, i: int) -> np.random.Generator:
    return np.random.default_rng([spec.seed, i])


def _unit(angle: float) -> Vec2:
    return (math.cos(angle), math.sin(angle))


def _draw(spec: SampleSpec, i: int) -> Tuple[Mat2, Vec2, Vec2]:
    rng = _rng(spec, i)
    lo, hi = spec.lambda_range
    l1, l2 = np.exp(rng.uniform(math.log(lo), math.log(hi), size=2))
    a1, a2 = rng.uniform(-math.pi, math.pi, size=2)
    F = (
        Mat2.rotation(float(a1))
        @ Mat2.diag(float(l1), float(l2))
        @ Mat2.rotation(float(a2))
    )
    b1, b2 = rng.uniform(-math.pi, math.pi, size=2)
    return F, _unit(float(b1)), _unit(float(b2))


def sample_glp2(spec: SampleSpec, i: int) -> Mat2:
    """
    Deterministic F = Q1 diag(l1, l2) Q2 for sample index ``i``.

    Singular values are log-uniform in ``spec.lambda_range`` and rotation
    angles uniform, so det F > 0 by construction.
    """
    if not 0 <= i < spec.n_points:
        raise IndexError(f"sample index {i} outside [0, {spec.n_points})")
    return _draw(spec, i)[0]


def _norm(v: Vec2) -> float:
    return math.hypot(v[0], v[1])


def _second_difference(
    W: MatrixFn, F: Mat2, D: Mat2, s: float
) -> Tuple[float, float]:
    """Central second difference along D and its rounding allowance."""
    step = D.scale(s)
    plus = float(W(F + step))
    centre = float(W(F))
    minus = float(W(F - step))
    value = (plus - 2.0 * centre + minus) / (s * s)
    size = max(abs(plus), abs(centre), abs(minus))
    return value, ROUNDING_FACTOR * EPS * size / (s * s)


def _lh(
    W: MatrixFn, F: Mat2, xi: Vec2, eta: Vec2, spec: SampleSpec
) -> Tuple[float, float]:
    if not F.det > 0.0:
        raise NonPositiveDeterminantError(F.det)
    D = Mat2.outer(xi, eta)
    s = spec.step_scale * F.frob / (_norm(xi) * _norm(eta))
    for _ in range(MAX_HALVINGS + 1):
        step = D.scale(s)
        if (F + step).det > 0.0 and (F - step).det > 0.0:
            return _second_difference(W, F, D, s)
        s *= 0.5
    raise DegenerateStencilError(
        f"det(F +/- s xi(x)eta) <= 0 after {MAX_HALVINGS} halvings at {F.entries()}"
    )


def lh_second_difference(
    W: MatrixFn, F: Mat2, xi: Vec2, eta: Vec2, spec: SampleSpec
) -> float:
    """
    [W(F + sD) - 2W(F) + W(F - sD)] / s^2 with D = xi (x) eta.

    s = step_scale |F| / (|xi| |eta|), halved up to three times to keep both
    stencil points in GL+(2).

    Raises:
        DegenerateStencilError: If no step keeps the determinant positive.
    """
    return _lh(W, F, xi, eta, spec)[0]


def _positive_interval(F: Mat2, D: Mat2) -> Tuple[float, float]:
    """
    Open interval around u = 0 where det(F + uD) > 0, shrunk away from roots.

    det(F + uD) = det F + u cof(F):D + u^2 det D.
    """
    c0 = F.det
    c1 = F.a22 * D.a11 - F.a21 * D.a12 - F.a12 * D.a21 + F.a11 * D.a22
    c2 = D.det
    lo, hi = -math.inf, math.inf
    if abs(c2) <= EPS * (abs(c1) + abs(c0)):
        if c1 > 0.0:
            lo = -c0 / c1
        elif c1 < 0.0:
            hi = -c0 / c1
    else:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc >= 0.0:
            root = math.sqrt(disc)
            # Stable quadratic roots.
            q = -0.5 * (c1 + math.copysign(root, c1))
            roots = sorted(r for r in (q / c2, c0 / q if q != 0.0 else math.inf))
            for r in roots:
                if r < 0.0:
                    lo = max(lo, r)
                elif r > 0.0:
                    hi = min(hi, r)
    return ROOT_MARGIN * lo, ROOT_MARGIN * hi


def _segment(
    W: MatrixFn, F: Mat2, xi: Vec2, eta: Vec2, spec: SampleSpec
) -> Tuple[float, float]:
    if not F.det > 0.0:
        raise NonPositiveDeterminantError(F.det)
    D = Mat2.outer(xi, eta)
    reach = spec.segment_scale * F.frob / (_norm(xi) * _norm(eta))
    lo, hi = _positive_interval(F, D)
    lo, hi = max(lo, -reach), min(hi, reach)
    if not hi - lo > EPS * reach:
        raise DegenerateStencilError(f"empty positive segment at {F.entries()}")
    us = np.linspace(lo, hi, spec.segment_steps)
    du = float(us[1] - us[0])
    values = [float(W(F + D.scale(float(u)))) for u in us]
    worst = math.inf
    worst_noise = 0.0
    for left, centre, right in zip(values, values[1:], values[2:]):
        d2 = (left - 2.0 * centre + right) / (du * du)
        if d2 < worst:
            worst = d2
            size = max(abs(left), abs(centre), abs(right))
            worst_noise = ROUNDING_FACTOR * EPS * size / (du * du)
    return worst, worst_noise


def segment_convexity(
    W: MatrixFn, F: Mat2, xi: Vec2, eta: Vec2, spec: SampleSpec
) -> float:
    """
    Most negative discrete second difference of u -> W(F + u xi(x)eta).

    The scanned range is [-L, L] with L = segment_scale |F| / (|xi| |eta|),
    cut to where det(F + u xi(x)eta) stays positive.

    Raises:
        DegenerateStencilError: If the admissible range is empty.
    """
    return _segment(W, F, xi, eta, spec)[0]


def run_oracle(W: MatrixFn, spec: SampleSpec) -> OracleReport:
    """
    Run both tests on ``spec.n_points`` samples; stop at the first violation.

    A violation is a second difference below -(tol + rounding allowance).
    Degenerate stencils are skipped and counted.
    """
    skipped = 0
    for i in range(spec.n_points):
        F, xi, eta = _draw(spec, i)
        for test, probe in (("lh", _lh), ("segment", _segment)):
            try:
                value, noise = probe(W, F, xi, eta, spec)
            except DegenerateStencilError as exc:
                skipped += 1
                logger.debug("sample %d skipped (%s): %s", i, test, exc)
                continue
            if value < -(spec.tol + noise):
                violation = Violation(
                    F=F.entries(),
                    xi=xi,
                    eta=eta,
                    second_difference=value,
                    sample_index=i,
                    test=test,
                )
                logger.info(
                    "rank-one violation at sample %d (%s): %.6e", i, test, value
                )
                return OracleReport(
                    status=OracleStatus.VIOLATION,
                    violation=violation,
                    points_tested=i + 1,
                    points_skipped=skipped,
                )
    return OracleReport(
        status=OracleStatus.CONSISTENT_CONVEX,
        points_tested=spec.n_points,
        points_skipped=skipped,
    )
