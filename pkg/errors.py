"""
Error vocabulary shared by every placemeasure module.

Each error carries the name reported by the CLI (``error_name``) and, when a
single place or part explains the failure, a ``witness``.
"""

from typing import Any, Optional


class PlaceMeasureError(Exception):
    error_name = "PlaceMeasureError"

    def __init__(self, message: str, witness: Optional[Any] = None) -> None:
        self.message = message
        self.witness = witness
        super().__init__(message)

    def describe(self) -> str:
        text = f"{self.error_name}: {self.message}"
        if self.witness is not None:
            text += f" (witness: {self.witness})"
        return text


class ParseError(PlaceMeasureError):
    """Malformed literal or definition file."""

    error_name = "ParseError"


class LevelNotDivisible(PlaceMeasureError):
    error_name = "LevelNotDivisible"


class BadLevel(PlaceMeasureError):
    error_name = "BadLevel"


class BadPlace(PlaceMeasureError):
    error_name = "BadPlace"


class InvalidBase(PlaceMeasureError):
    error_name = "InvalidBase"


class InvalidOverride(PlaceMeasureError):
    error_name = "InvalidOverride"


class NotAChain(PlaceMeasureError):
    error_name = "NotAChain"


class NotValidated(PlaceMeasureError):
    error_name = "NotValidated"


class IncompatibleTails(PlaceMeasureError):
    error_name = "IncompatibleTails"


class InexactValue(PlaceMeasureError):
    error_name = "InexactValue"


class ZeroElement(PlaceMeasureError):
    error_name = "ZeroElement"


class BadPrime(PlaceMeasureError):
    error_name = "BadPrime"


class NotAnElement(PlaceMeasureError):
    """Explicit function rejected by the product formula."""

    error_name = "NotAnElement"


class NotAPartition(PlaceMeasureError):
    error_name = "NotAPartition"


class ScopeMismatch(PlaceMeasureError):
    error_name = "ScopeMismatch"


class NotARefinement(PlaceMeasureError):
    error_name = "NotARefinement"


class NotGloballyConsistent(PlaceMeasureError):
    error_name = "NotGloballyConsistent"


class NotDisjoint(PlaceMeasureError):
    error_name = "NotDisjoint"


class UnionNotInAlgebra(PlaceMeasureError):
    error_name = "UnionNotInAlgebra"


class InfiniteContradiction(PlaceMeasureError):
    """Raised for +inf plus -inf: a measure takes at most one infinite sign."""

    error_name = "InfiniteContradiction"
