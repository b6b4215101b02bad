"""
Planar kinematic value types.

``Mat2`` is the deformation gradient F (and the derived U, log U). The hot
paths of the criteria and the oracle build hundreds of thousands of these, so
they are slotted frozen dataclasses with scalar fields rather than numpy
arrays; ``as_array``/``from_array`` bridge to numpy where needed.
"""

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from rankone.exceptions import NonFiniteError

Vec2 = Tuple[float, float]


@dataclass(frozen=True, slots=True)
class Mat2:
    """Real 2x2 matrix [[a11, a12], [a21, a22]] with finite entries."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self) -> None:
        if not (
            math.isfinite(self.a11)
            and math.isfinite(self.a12)
            and math.isfinite(self.a21)
            and math.isfinite(self.a22)
        ):
            raise NonFiniteError(f"matrix entries must be finite: {self.entries()}")

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def zero(cls) -> "Mat2":
        return cls(0.0, 0.0, 0.0, 0.0)

    @classmethod
    def diag(cls, d1: float, d2: float) -> "Mat2":
        return cls(d1, 0.0, 0.0, d2)

    @classmethod
    def rotation(cls, alpha: float) -> "Mat2":
        """Counter-clockwise rotation R(alpha) in SO(2)."""
        c, s = math.cos(alpha), math.sin(alpha)
        return cls(c, -s, s, c)

    @classmethod
    def outer(cls, xi: Vec2, eta: Vec2) -> "Mat2":
        """Rank-one matrix xi (x) eta."""
        return cls(xi[0] * eta[0], xi[0] * eta[1], xi[1] * eta[0], xi[1] * eta[1])

    @classmethod
    def from_entries(cls, values: Sequence[float]) -> "Mat2":
        """Build from row-major ``a11, a12, a21, a22``."""
        if len(values) != 4:
            raise ValueError(f"expected 4 entries, got {len(values)}")
        return cls(*(float(v) for v in values))

    @classmethod
    def from_array(cls, array: NDArray[np.float64]) -> "Mat2":
        return cls(
            float(array[0, 0]),
            float(array[0, 1]),
            float(array[1, 0]),
            float(array[1, 1]),
        )

    def as_array(self) -> NDArray[np.float64]:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=np.float64)

    def entries(self) -> Tuple[float, float, float, float]:
        return (self.a11, self.a12, self.a21, self.a22)

    def __iter__(self) -> Iterator[float]:
        return iter(self.entries())

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    @property
    def frob_sq(self) -> float:
        """Squared Frobenius norm |F|^2."""
        return (
            self.a11 * self.a11
            + self.a12 * self.a12
            + self.a21 * self.a21
            + self.a22 * self.a22
        )

    @property
    def frob(self) -> float:
        return math.sqrt(self.frob_sq)

    def transpose(self) -> "Mat2":
        return Mat2(self.a11, self.a21, self.a12, self.a22)

    def inverse(self) -> "Mat2":
        d = self.det
        if d == 0.0:
            raise NonFiniteError("singular matrix has no inverse")
        return Mat2(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d)

    def scale(self, a: float) -> "Mat2":
        return Mat2(a * self.a11, a * self.a12, a * self.a21, a * self.a22)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a11 + other.a11,
            self.a12 + other.a12,
            self.a21 + other.a21,
            self.a22 + other.a22,
        )

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a11 - other.a11,
            self.a12 - other.a12,
            self.a21 - other.a21,
            self.a22 - other.a22,
        )

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def is_symmetric(self, rel_tol: float = 1e-12) -> bool:
        return abs(self.a12 - self.a21) <= rel_tol * self.frob


@dataclass(frozen=True, slots=True)
class SingularPair:
    """Singular values of F in GL+(2), descending."""

    lambda1: float
    lambda2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lambda1) and math.isfinite(self.lambda2)):
            raise NonFiniteError("singular values must be finite")
        if not self.lambda1 >= self.lambda2 > 0.0:
            raise ValueError(
                f"singular values must satisfy lambda1 >= lambda2 > 0, "
                f"got ({self.lambda1}, {self.lambda2})"
            )

    @property
    def ratio(self) -> float:
        return self.lambda1 / self.lambda2

    @property
    def product(self) -> float:
        return self.lambda1 * self.lambda2


@dataclass(frozen=True, slots=True)
class Invariants2:
    """Isochoric invariants of F: t = lambda1/lambda2, theta, eta, K."""

    t: float
    theta: float
    eta: float
    k: float

    @classmethod
    def from_singular(cls, pair: SingularPair) -> "Invariants2":
        t = pair.ratio
        log_t = math.log(t)
        theta = log_t * log_t
        return cls(t=t, theta=theta, eta=0.5 * theta, k=0.5 * (t + 1.0 / t))
