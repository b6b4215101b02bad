"""
Closed-form planar kinematics.

All routines work on a single 2x2 matrix with scalar ``math`` calls. The two
radicands ``|F|^2 + 2 det F`` and ``|F|^2 - 2 det F`` are evaluated as sums of
squares, ``(a11 + a22)^2 + (a21 - a12)^2`` and ``(a11 - a22)^2 + (a12 + a21)^2``,
which keeps the singular values accurate for nearly conformal F.
"""

import math

from rankone.exceptions import (
    NonPositiveDeterminantError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)
from rankone.models.matrix import Invariants2, Mat2, SingularPair


def _conformal_sq(F: Mat2) -> float:
    """|F|^2 + 2 det F, always >= 0."""
    s = F.a11 + F.a22
    r = F.a21 - F.a12
    return s * s + r * r


def _anticonformal_sq(F: Mat2) -> float:
    """|F|^2 - 2 det F, always >= 0."""
    d = F.a11 - F.a22
    r = F.a12 + F.a21
    return d * d + r * r


def _require_glp(F: Mat2) -> float:
    det = F.det
    if not det > 0.0:
        raise NonPositiveDeterminantError(det)
    return det


def svd2(F: Mat2) -> SingularPair:
    """
    Singular values of F in GL+(2).

    The larger value comes from the half-sum of the two square roots; the
    smaller one is recovered as det F / lambda1 so that the product matches
    det F to rounding.

    Args:
        F: Deformation gradient with det F > 0.

    Returns:
        SingularPair: (lambda1, lambda2) with lambda1 >= lambda2 > 0.

    Raises:
        NonPositiveDeterminantError: If det F <= 0.
    """
    det = _require_glp(F)
    root_plus = math.sqrt(max(_conformal_sq(F), 0.0))
    root_minus = math.sqrt(max(_anticonformal_sq(F), 0.0))
    lambda1 = 0.5 * (root_plus + root_minus)
    lambda2 = min(det / lambda1, lambda1)
    return SingularPair(lambda1, lambda2)


def invariants(F: Mat2) -> Invariants2:
    """t, theta, eta and K of F, all computed from the singular values."""
    return Invariants2.from_singular(svd2(F))


def polar_u(F: Mat2) -> Mat2:
    """
    Right stretch tensor U = sqrt(F^T F).

    Uses the Cayley-Hamilton closed form
    ``U = (F^T F + det F * id) / sqrt(tr(F^T F) + 2 det F)``.

    Raises:
        NonPositiveDeterminantError: If det F <= 0.
    """
    det = _require_glp(F)
    c11 = F.a11 * F.a11 + F.a21 * F.a21
    c12 = F.a11 * F.a12 + F.a21 * F.a22
    c22 = F.a12 * F.a12 + F.a22 * F.a22
    inv_norm = 1.0 / math.sqrt(_conformal_sq(F))
    off = c12 * inv_norm
    return Mat2((c11 + det) * inv_norm, off, off, (c22 + det) * inv_norm)


def log_spd(U: Mat2) -> Mat2:
    """
    Principal logarithm of a symmetric positive-definite 2x2 matrix.

    With eigenvalues l1 >= l2 and eigenvector angle phi the result is
    ``mean * id + half * [[cos 2phi, sin 2phi], [sin 2phi, -cos 2phi]]`` where
    mean = (log l1 + log l2)/2 and half = (log l1 - log l2)/2.

    Raises:
        NotSymmetricError: If |U - U^T| > 1e-12 |U|.
        NotPositiveDefiniteError: If an eigenvalue is not positive.
    """
    if not U.is_symmetric(1e-12):
        raise NotSymmetricError(f"matrix is not symmetric: {U.entries()}")
    b = 0.5 * (U.a12 + U.a21)
    mid = 0.5 * (U.a11 + U.a22)
    half_diff = 0.5 * (U.a11 - U.a22)
    rad = math.hypot(half_diff, b)
    l1 = mid + rad
    det = U.a11 * U.a22 - b * b
    if not (l1 > 0.0 and det > 0.0):
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite: {U.entries()}"
        )
    l2 = det / l1
    log1 = math.log(l1)
    log2 = math.log(l2)
    mean = 0.5 * (log1 + log2)
    if rad == 0.0:
        return Mat2(mean, 0.0, 0.0, mean)
    half = 0.5 * (log1 - log2)
    c2 = half_diff / rad
    s2 = b / rad
    off = half * s2
    return Mat2(mean + half * c2, off, off, mean - half * c2)


def dev2(X: Mat2) -> Mat2:
    """Planar deviator X - tr(X)/2 * id."""
    m = X.trace / 2.0
    return Mat2(X.a11 - m, X.a12, X.a21, X.a22 - m)


def distortion_k(F: Mat2) -> float:
    """
    Planar distortion K(F) = |F|^2 / (2 det F).

    Mathematically K >= 1; rounding below 1 on conformal F is clamped.

    Raises:
        NonPositiveDeterminantError: If det F <= 0.
    """
    det = _require_glp(F)
    return max(0.5 * F.frob_sq / det, 1.0)


def op_ratio(F: Mat2) -> float:
    """|F|_op^2 / det F, which equals lambda1 / lambda2."""
    pair = svd2(F)
    return pair.lambda1 / pair.lambda2


def dist_euclid_sq_so2(F: Mat2) -> float:
    """Squared Euclidean distance of any F to SO(2)."""
    return F.frob_sq - 2.0 * math.sqrt(_conformal_sq(F)) + 2.0


def qc_hull_dist_sq_so2(F: Mat2) -> float:
    """Quasiconvex hull of dist^2(., SO(2)) on all of R^{2x2}."""
    q = _conformal_sq(F)
    if q <= 1.0:
        return 1.0 - 2.0 * F.det
    root = math.sqrt(q) - 1.0
    return root * root + 1.0 - 2.0 * F.det


def w_sharp(F: Mat2) -> float:
    """
    Two-branch energy on R^{2x2}: -4 det F while the largest singular value
    stays at or below 1/2, and 2(lambda_max - lambda_min) - 1 beyond.
    """
    root_minus = math.sqrt(_anticonformal_sq(F))
    root_plus = math.sqrt(_conformal_sq(F))
    if root_minus + root_plus <= 1.0:
        return -4.0 * F.det
    return 2.0 * root_minus - 1.0
