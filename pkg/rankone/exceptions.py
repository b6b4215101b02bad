"""
Typed errors raised by the rankone library.

Every error derives from ``RankOneError`` (itself a ``ValueError``) so callers
can catch the whole family at the API and CLI boundaries.
"""

from typing import Optional


class RankOneError(ValueError):
    """Base class for all domain errors."""


class NonFiniteError(RankOneError):
    """A matrix entry or scalar input is NaN or infinite."""


class NonPositiveDeterminantError(RankOneError):
    """The operation requires det F > 0."""

    def __init__(self, det: float) -> None:
        self.det = det
        super().__init__(f"determinant must be positive, got {det!r}")


class NotSymmetricError(RankOneError):
    """Matrix is not symmetric within tolerance."""


class NotPositiveDefiniteError(RankOneError):
    """Matrix is not positive definite."""


class DomainError(RankOneError):
    """A function was evaluated outside of its domain."""

    def __init__(self, function: str, argument: object, reason: str = "") -> None:
        self.function = function
        self.argument = argument
        message = f"{function} is undefined at {argument!r}"
        if reason:
            message = f"{message}: {reason}"
        super().__init__(message)


class NotIsochoricError(RankOneError):
    """Energy fails the scaling check W(aF) = W(F)."""


class RegistrationError(RankOneError):
    """A representation payload failed its registration-time property check."""


class DegenerateStencilError(RankOneError):
    """A rank-one stencil cannot be kept inside GL+(2)."""


class UnknownEnergyError(RankOneError):
    """Name is not in the energy catalog."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"unknown energy: {name!r}")


class ParamOutOfRangeError(RankOneError):
    """Energy parameter is unknown or outside its admissible range."""


class ExprError(RankOneError):
    """Base class for expression language errors."""


class ExprSyntaxError(ExprError):
    """Malformed expression; ``position`` is the 0-based byte offset."""

    def __init__(
        self, position: int, expected: str, found: Optional[str] = None
    ) -> None:
        self.position = position
        self.expected = expected
        self.found = found
        got = "end of input" if found is None else repr(found)
        super().__init__(
            f"syntax error at position {position}: expected {expected}, got {got}"
        )


class UnknownIdentifierError(ExprError):
    """Identifier is neither a declared variable nor a known function."""

    def __init__(self, name: str, position: int) -> None:
        self.name = name
        self.position = position
        super().__init__(f"unknown identifier {name!r} at position {position}")


class ArityError(ExprError):
    """Function called with the wrong number of arguments."""

    def __init__(self, name: str, expected: str, got: int) -> None:
        self.name = name
        self.expected = expected
        self.got = got
        super().__init__(f"{name}() takes {expected} argument(s), got {got}")


class UnboundVariableError(ExprError):
    """Evaluation was requested without a binding for a variable."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"variable {name!r} is not bound")
