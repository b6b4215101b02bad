"""
Energy representation types.

An energy can be carried as a matrix function W(F), a symmetric function of
the singular values g(l1, l2), or one of the scalar forms h(t), f(theta),
ftilde(eta), z(r). Scalar forms are ``ScalarFn`` objects: a callable with a
declared domain and optional analytic first and second derivatives.

Payloads are checked once at construction (finiteness, symmetry, scaling) on
samples drawn from a fixed seed so that failures are reproducible.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from rankone.config import settings
from rankone.exceptions import (
    DomainError,
    NotIsochoricError,
    RankOneError,
    RegistrationError,
)
from rankone.models.matrix import Mat2

logger = logging.getLogger(__name__)

RealFn = Callable[[float], float]
PairFn = Callable[[float, float], float]
MatrixFn = Callable[[Mat2], float]

ISOCHORIC_SCALES = (1.0 / 7.0, 0.5, 3.0, 42.0)


def _guarded(name: str, fn: Callable[[], float], argument: object) -> float:
    """Run ``fn``; arithmetic failures and non-finite values become DomainError."""
    try:
        value = fn()
    except RankOneError:
        raise
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(name, argument, str(exc)) from exc
    if not math.isfinite(value):
        raise DomainError(name, argument, "non-finite value")
    return float(value)


@dataclass(frozen=True, slots=True)
class Interval:
    """Interval [lo, hi] with optionally open ends; ``hi`` may be infinite."""

    lo: float
    hi: float = math.inf
    lo_closed: bool = True
    hi_closed: bool = False

    def contains(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def sample_points(self, rng: np.random.Generator, n: int = 12) -> List[float]:
        """Registration sample: the closed lower end plus offsets in [2.5e-3, 20]."""
        offsets = np.exp(rng.uniform(-6.0, 3.0, size=n))
        points = [self.lo] if self.lo_closed else []
        points.extend(float(self.lo + o) for o in offsets)
        return [p for p in points if self.contains(p)]

    def describe(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


POSITIVE = Interval(0.0, lo_closed=False)
HALF_LINE = Interval(0.0)
FROM_ONE = Interval(1.0)


def registration_rng() -> np.random.Generator:
    """Generator seeded with ``settings.registration_seed``."""
    return np.random.default_rng(settings.registration_seed)


@dataclass(frozen=True)
class ScalarFn:
    """
    Real function of one variable with a declared domain.

    Attributes:
        fn: The function itself.
        domain: Where ``fn`` is defined.
        d1: Optional analytic first derivative.
        d2: Optional analytic second derivative.
        name: Label used in error messages and reports.
        register: Run the finiteness check at construction.
    """

    fn: RealFn
    domain: Interval
    d1: Optional[RealFn] = None
    d2: Optional[RealFn] = None
    name: str = "fn"
    register: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.register:
            return
        for x in self.domain.sample_points(registration_rng()):
            try:
                self(x)
            except DomainError as exc:
                logger.warning("registration failed for %s at %r", self.name, x)
                raise RegistrationError(
                    f"{self.name} is not finite on its domain {self.domain.describe()}:"
                    f" {exc}"
                ) from exc

    def __call__(self, x: float) -> float:
        if not self.domain.contains(x):
            raise DomainError(self.name, x, f"outside {self.domain.describe()}")
        return _guarded(self.name, lambda: self.fn(x), x)

    def derivative(self, order: int, x: float) -> Optional[float]:
        """Analytic derivative of order 1 or 2 at x, or None when not registered."""
        d = self.d1 if order == 1 else self.d2
        if d is None:
            return None
        if not self.domain.contains(x):
            raise DomainError(f"{self.name}'", x, f"outside {self.domain.describe()}")
        primes = "'" * order
        return _guarded(f"{self.name}{primes}", lambda: d(x), x)

    def analytic_derivative(self, order: int, x: float) -> float:
        """Like ``derivative`` but the derivative must be registered."""
        value = self.derivative(order, x)
        if value is None:
            raise TypeError(f"{self.name} has no analytic derivative of order {order}")
        return value

    @property
    def has_analytic(self) -> bool:
        return self.d1 is not None and self.d2 is not None


@dataclass(frozen=True)
class SymmetricFn2:
    """g(x, y) with g(x, y) = g(y, x), checked on a seeded sample."""

    fn: PairFn
    name: str = "g"
    register: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.register:
            return
        rng = registration_rng()
        pairs = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=(12, 2)))
        for x, y in pairs:
            xy = self(float(x), float(y))
            yx = self(float(y), float(x))
            if not math.isclose(xy, yx, rel_tol=1e-12, abs_tol=1e-12):
                logger.warning(
                    "symmetry check failed for %s at (%g, %g)", self.name, x, y
                )
                raise RegistrationError(
                    f"{self.name} is not symmetric: g({x:g}, {y:g}) = {xy!r} "
                    f"but g({y:g}, {x:g}) = {yx!r}"
                )

    def __call__(self, x: float, y: float) -> float:
        if not (x > 0.0 and y > 0.0):
            raise DomainError(self.name, (x, y), "singular values must be positive")
        return _guarded(self.name, lambda: self.fn(x, y), (x, y))


class RepKind(str, Enum):
    """The six ways an energy can be represented."""

    MATRIX_W = "MatrixW"
    SYMMETRIC_G = "SymmetricG"
    RATIO_H = "RatioH"
    LOGSQ_F = "LogSqF"
    STRAIN_FTILDE = "StrainFTilde"
    DISTORTION_Z = "DistortionZ"


Payload = Union[ScalarFn, SymmetricFn2, MatrixFn]

_SCALAR_KINDS = {
    RepKind.RATIO_H,
    RepKind.LOGSQ_F,
    RepKind.STRAIN_FTILDE,
    RepKind.DISTORTION_Z,
}


def sample_matrices(rng: np.random.Generator, n: int = 8) -> List[Mat2]:
    """Seeded F = R(a1) diag(l1, l2) R(a2) with l in [0.2, 5]."""
    lambdas = np.exp(rng.uniform(math.log(0.2), math.log(5.0), size=(n, 2)))
    angles = rng.uniform(-math.pi, math.pi, size=(n, 2))
    return [
        Mat2.rotation(float(a1))
        @ Mat2.diag(float(l1), float(l2))
        @ Mat2.rotation(float(a2))
        for (l1, l2), (a1, a2) in zip(lambdas, angles)
    ]


def check_isochoric(W: MatrixFn, name: str = "W") -> None:
    """
    Verify W(aF) = W(F) within 1e-9 on seeded samples.

    Raises:
        NotIsochoricError: At the first sample that fails.
    """
    for F in sample_matrices(registration_rng()):
        base = _guarded(name, lambda: W(F), F.entries())
        for a in ISOCHORIC_SCALES:
            scaled = _guarded(name, lambda: W(F.scale(a)), a)
            if not math.isclose(scaled, base, rel_tol=1e-9, abs_tol=1e-9):
                raise NotIsochoricError(
                    f"{name} is not isochoric: W(aF) = {scaled!r} != W(F) = {base!r}"
                    f" for a = {a:g}"
                )


def _check_ratio_symmetry(h: ScalarFn) -> None:
    for t in np.geomspace(1.0001, 1e3, 16):
        forward = h(float(t))
        backward = h(float(1.0 / t))
        if not math.isclose(forward, backward, rel_tol=1e-10, abs_tol=1e-10):
            raise RegistrationError(
                f"{h.name} violates h(t) = h(1/t) at t = {t:g}:"
                f" {forward!r} vs {backward!r}"
            )


@dataclass(frozen=True)
class EnergyRep:
    """
    An energy in one representation.

    ``payload`` is a ``ScalarFn`` for the four scalar kinds, a ``SymmetricFn2``
    for ``SymmetricG`` and a plain matrix callable for ``MatrixW``.
    """

    kind: RepKind
    payload: Payload
    isochoric_declared: bool = True
    name: str = "energy"

    def __post_init__(self) -> None:
        if self.kind in _SCALAR_KINDS and not isinstance(self.payload, ScalarFn):
            raise RegistrationError(f"{self.kind.value} payload must be a ScalarFn")
        symmetric = isinstance(self.payload, SymmetricFn2)
        if self.kind is RepKind.SYMMETRIC_G and not symmetric:
            raise RegistrationError("SymmetricG payload must be a SymmetricFn2")
        if self.kind is RepKind.RATIO_H:
            _check_ratio_symmetry(self.scalar)
        if self.kind is RepKind.MATRIX_W and self.isochoric_declared:
            check_isochoric(self.matrix_fn, self.name)

    @property
    def scalar(self) -> ScalarFn:
        if not isinstance(self.payload, ScalarFn):
            raise TypeError(f"{self.kind.value} energy has no scalar payload")
        return self.payload

    @property
    def symmetric(self) -> SymmetricFn2:
        if not isinstance(self.payload, SymmetricFn2):
            raise TypeError(f"{self.kind.value} energy has no symmetric payload")
        return self.payload

    @property
    def matrix_fn(self) -> MatrixFn:
        if self.kind is not RepKind.MATRIX_W or isinstance(
            self.payload, (ScalarFn, SymmetricFn2)
        ):
            raise TypeError(f"{self.kind.value} energy has no matrix payload")
        return self.payload

    @property
    def variables(self) -> Tuple[str, ...]:
        return VARIABLES[self.kind]


VARIABLES = {
    RepKind.MATRIX_W: ("F",),
    RepKind.SYMMETRIC_G: ("l1", "l2"),
    RepKind.RATIO_H: ("t",),
    RepKind.LOGSQ_F: ("theta",),
    RepKind.STRAIN_FTILDE: ("eta",),
    RepKind.DISTORTION_Z: ("r",),
}
