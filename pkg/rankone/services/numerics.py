"""
Finite-difference derivatives of scalar functions with error estimates.

Analytic derivatives registered on a ``ScalarFn`` are used as-is. Otherwise a
second-order stencil is evaluated at steps h and h/2 and combined by one level
of Richardson extrapolation. Near a domain boundary the central stencil is
first shrunk, then replaced by a one-sided one of the same order.

Every estimate carries an error bound (truncation plus rounding) that the
criteria use as a noise floor.
"""

import logging
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from rankone.exceptions import DomainError
from rankone.models.energy import ScalarFn

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon
SAFETY = 10.0
# Smallest accepted shrunk central step, relative to the nominal one.
MIN_SHRINK = 0.01


@dataclass(frozen=True, slots=True)
class Stencil:
    """Offsets (in units of h) and weights of a difference formula."""

    offsets: Tuple[float, ...]
    weights: Tuple[float, ...]
    order: int

    @property
    def reach(self) -> Tuple[float, float]:
        return min(self.offsets), max(self.offsets)

    def mirrored(self) -> "Stencil":
        sign = -1.0 if self.order % 2 else 1.0
        return Stencil(
            tuple(-o for o in self.offsets),
            tuple(sign * w for w in self.weights),
            self.order,
        )


CENTRAL_D1 = Stencil((-1.0, 1.0), (-0.5, 0.5), 1)
CENTRAL_D2 = Stencil((-1.0, 0.0, 1.0), (1.0, -2.0, 1.0), 2)
FORWARD_D1 = Stencil((0.0, 1.0, 2.0), (-1.5, 2.0, -0.5), 1)
FORWARD_D2 = Stencil((0.0, 1.0, 2.0, 3.0), (2.0, -5.0, 4.0, -1.0), 2)
BACKWARD_D1 = FORWARD_D1.mirrored()
BACKWARD_D2 = FORWARD_D2.mirrored()

_CENTRAL = {1: CENTRAL_D1, 2: CENTRAL_D2}
_ONE_SIDED = {1: (FORWARD_D1, BACKWARD_D1), 2: (FORWARD_D2, BACKWARD_D2)}


@dataclass(frozen=True, slots=True)
class Estimate:
    """Derivative value with an absolute error bound."""

    value: float
    error: float


def richardson_extrapolate(
    base_values: Sequence[float], p: int = 2, r: float = 2.0
) -> float:
    """
    Richardson extrapolation of approximations taken at steps h, h/r, h/r^2...

    Args:
        base_values: Approximations, coarsest first.
        p: Order of the leading error term.
        r: Step reduction factor between successive entries.

    Raises:
        ValueError: With fewer than two approximations.
    """
    if len(base_values) < 2:
        raise ValueError("richardson_extrapolate needs at least two values")
    values: List[float] = list(base_values)
    k = p
    while len(values) > 1:
        factor = r**k
        values = [
            (factor * fine - coarse) / (factor - 1.0)
            for coarse, fine in zip(values, values[1:])
        ]
        k += 1
    return values[0]


def _fits(fn: ScalarFn, x: float, stencil: Stencil, h: float) -> bool:
    lo, hi = stencil.reach
    return fn.domain.contains(x + lo * h) and fn.domain.contains(x + hi * h)


def _choose(fn: ScalarFn, x: float, order: int, h: float) -> Tuple[Stencil, float]:
    """Central stencil, shrunk central stencil, or a one-sided one."""
    central = _CENTRAL[order]
    if _fits(fn, x, central, h):
        return central, h
    boundary = min(abs(x - fn.domain.lo), abs(fn.domain.hi - x))
    shrunk = 0.5 * boundary
    if shrunk >= MIN_SHRINK * h and _fits(fn, x, central, shrunk):
        return central, shrunk
    for stencil in _ONE_SIDED[order]:
        if _fits(fn, x, stencil, h):
            logger.debug("one-sided stencil, order %d, %s at %r", order, fn.name, x)
            return stencil, h
    raise DomainError(fn.name, x, "no difference stencil fits inside the domain")


def _apply(
    fn: ScalarFn, x: float, stencil: Stencil, h: float
) -> Tuple[float, float]:
    """Difference quotient and the largest |f| it touched."""
    total = 0.0
    fmax = 0.0
    for offset, weight in zip(stencil.offsets, stencil.weights):
        value = fn(x + offset * h)
        fmax = max(fmax, abs(value))
        total += weight * value
    return total / h**stencil.order, fmax


def estimate(
    fn: ScalarFn, x: float, order: int, step: Optional[float] = None
) -> Estimate:
    """
    Derivative of ``fn`` of the given order at ``x``.

    Args:
        fn: The function; analytic derivatives are preferred when present.
        x: Evaluation point inside ``fn.domain``.
        order: 1 or 2.
        step: Step factor; the actual step is ``step * max(1, |x|)``.
            Defaults to eps^(1/3) for order 1 and eps^(1/4) for order 2.

    Raises:
        DomainError: If x is outside the domain or no stencil fits.
    """
    if order not in (1, 2):
        raise ValueError(f"derivative order must be 1 or 2, got {order}")
    scale = max(1.0, abs(x))
    analytic = fn.derivative(order, x)
    if analytic is not None:
        rounding = abs(analytic) + abs(fn(x)) / scale**order
        return Estimate(analytic, SAFETY * EPS * rounding)

    if step is None:
        step = EPS ** (1.0 / 3.0) if order == 1 else EPS**0.25
    if not fn.domain.contains(x):
        raise DomainError(fn.name, x, f"outside {fn.domain.describe()}")
    stencil, h = _choose(fn, x, order, step * scale)
    coarse, _ = _apply(fn, x, stencil, h)
    fine, fmax = _apply(fn, x, stencil, 0.5 * h)
    value = richardson_extrapolate([coarse, fine], p=2)
    weight_sum = sum(abs(w) for w in stencil.weights)
    rounding = SAFETY * EPS * weight_sum * fmax / (0.5 * h) ** order
    return Estimate(value, abs(value - fine) + rounding)


def d1_estimate(fn: ScalarFn, x: float, step: Optional[float] = None) -> Estimate:
    return estimate(fn, x, 1, step)


def d2_estimate(fn: ScalarFn, x: float, step: Optional[float] = None) -> Estimate:
    return estimate(fn, x, 2, step)


def d1_numeric(fn: ScalarFn, x: float, step: Optional[float] = None) -> float:
    """First derivative of ``fn`` at ``x``."""
    return d1_estimate(fn, x, step).value


def d2_numeric(fn: ScalarFn, x: float, step: Optional[float] = None) -> float:
    """Second derivative of ``fn`` at ``x``."""
    return d2_estimate(fn, x, step).value
