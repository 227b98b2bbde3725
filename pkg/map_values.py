"""
Values taken by consistent maps, charges and integrals.

Four kinds are kept apart so that exact results stay exact:

* ``ExactRational``: a rational number q;
* ``RationalOverLog``: q / log p for one prime p;
* ``LogLinear``: q0 + sum of q_p * log p;
* ``FloatValue``: a double, used once incompatible scales meet.

Addition stays exact within a kind (and for rational + log-linear); anything
else falls back to floats.  Comparisons of floats use a relative tolerance.
"""

import abc
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Mapping, Tuple, Union

from decouple import config

FLOAT_TOLERANCE = config("PLACEMEASURE_FLOAT_TOLERANCE", default=1e-12, cast=float)

Rational = Union[int, Fraction]


class MapValue(abc.ABC):
    kind = "value"

    @abc.abstractmethod
    def to_float(self) -> float:
        ...

    @abc.abstractmethod
    def is_zero(self) -> bool:
        ...

    @abc.abstractmethod
    def scale(self, r: Rational) -> "MapValue":
        ...

    @property
    def is_exact(self) -> bool:
        return True

    def sign(self) -> int:
        x = self.to_float()
        return (x > 0) - (x < 0)

    def __add__(self, other: "MapValue") -> "MapValue":
        return add(self, other)

    def __neg__(self) -> "MapValue":
        return self.scale(-1)

    def __sub__(self, other: "MapValue") -> "MapValue":
        return add(self, other.scale(-1))

    def __mul__(self, other: "MapValue") -> "MapValue":
        return multiply(self, other)


@dataclass(frozen=True)
class ExactRational(MapValue):
    q: Fraction
    kind = "exact"

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))

    def to_float(self) -> float:
        return float(self.q)

    def is_zero(self) -> bool:
        return self.q == 0

    def scale(self, r: Rational) -> MapValue:
        return ExactRational(self.q * r)


@dataclass(frozen=True)
class RationalOverLog(MapValue):
    """The value q / log p."""

    q: Fraction
    prime: int
    kind = "over_log"

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))

    def to_float(self) -> float:
        return float(self.q) / math.log(self.prime)

    def is_zero(self) -> bool:
        return self.q == 0

    def scale(self, r: Rational) -> MapValue:
        return RationalOverLog(self.q * r, self.prime)


@dataclass(frozen=True)
class LogLinear(MapValue):
    """constant + sum(coefficient * log p); zero coefficients are never stored."""

    constant: Fraction
    coefficients: Tuple[Tuple[int, Fraction], ...] = ()
    kind = "log_linear"

    @classmethod
    def of(cls, constant: Rational = 0, coefficients: Mapping[int, Rational] = None) -> "LogLinear":
        terms = {p: Fraction(q) for p, q in (coefficients or {}).items() if q != 0}
        return cls(Fraction(constant), tuple(sorted(terms.items())))

    def coefficient(self, p: int) -> Fraction:
        return dict(self.coefficients).get(p, Fraction(0))

    def to_float(self) -> float:
        return float(self.constant) + sum(float(q) * math.log(p) for p, q in self.coefficients)

    def is_zero(self) -> bool:
        return self.constant == 0 and not self.coefficients

    def scale(self, r: Rational) -> MapValue:
        return LogLinear.of(self.constant * r, {p: q * r for p, q in self.coefficients})


@dataclass(frozen=True)
class FloatValue(MapValue):
    x: float
    kind = "float"

    @property
    def is_exact(self) -> bool:
        return False

    def to_float(self) -> float:
        return self.x

    def is_zero(self) -> bool:
        return self.x == 0.0

    def scale(self, r: Rational) -> MapValue:
        return FloatValue(self.x * float(r))


ZERO = ExactRational(Fraction(0))


def _merge_terms(a: LogLinear, b: LogLinear) -> LogLinear:
    terms: Dict[int, Fraction] = dict(a.coefficients)
    for p, q in b.coefficients:
        terms[p] = terms.get(p, Fraction(0)) + q
    return LogLinear.of(a.constant + b.constant, terms)


def add(a: MapValue, b: MapValue) -> MapValue:
    if isinstance(a, ExactRational) and isinstance(b, ExactRational):
        return ExactRational(a.q + b.q)
    if isinstance(a, RationalOverLog) and isinstance(b, RationalOverLog) and a.prime == b.prime:
        return RationalOverLog(a.q + b.q, a.prime)
    if isinstance(a, LogLinear) and isinstance(b, LogLinear):
        return _merge_terms(a, b)
    if isinstance(a, ExactRational) and isinstance(b, LogLinear):
        return _merge_terms(LogLinear.of(a.q), b)
    if isinstance(a, LogLinear) and isinstance(b, ExactRational):
        return _merge_terms(a, LogLinear.of(b.q))
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    return FloatValue(a.to_float() + b.to_float())


def multiply(a: MapValue, b: MapValue) -> MapValue:
    """Pair a function value with a map value, keeping exact pairings exact."""
    if a.is_zero() or b.is_zero():
        return ZERO
    if isinstance(a, ExactRational):
        return b.scale(a.q)
    if isinstance(b, ExactRational):
        return a.scale(b.q)
    if isinstance(a, LogLinear) and isinstance(b, RationalOverLog):
        a, b = b, a
    if isinstance(a, RationalOverLog) and isinstance(b, LogLinear):
        # (q / log p) * (k log p) = q k, provided log p is the only term
        if b.constant == 0 and [p for p, _ in b.coefficients] == [a.prime]:
            return ExactRational(a.q * b.coefficient(a.prime))
    return FloatValue(a.to_float() * b.to_float())


def sum_values(values: Iterable[MapValue]) -> MapValue:
    return reduce(add, values, ZERO)


def values_agree(a: MapValue, b: MapValue, rel_tol: float = FLOAT_TOLERANCE) -> bool:
    """Exact equality when the difference stays exact, else relative closeness."""
    difference = a - b
    if difference.is_exact:
        return difference.is_zero()
    return math.isclose(a.to_float(), b.to_float(), rel_tol=rel_tol, abs_tol=rel_tol)


def is_negligible(value: MapValue, tolerance: float) -> bool:
    if value.is_exact:
        return value.is_zero()
    return abs(value.to_float()) < tolerance
