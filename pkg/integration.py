"""
Locally constant functions on Y and their integrals against consistent maps.

``f_alpha`` turns an algebraic number (up to roots of unity) into the simple
function y -> log ||alpha||_y; integrating it against a map c gives Phi_c(alpha).
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Union

from decouple import config
from sympy import factorint, isprime

from consistent_maps import LAMBDA, ConsistentMap, evaluate
from cyclotomic_tower import INFINITY, Level, Place, RationalPlace, compositum, fiber, places_above
from errors import BadPrime, NotAnElement, NotValidated, ZeroElement
from map_values import FloatValue, LogLinear, MapValue, Rational, is_negligible, multiply, sum_values
from place_sets import RSet

PRODUCT_FORMULA_TOLERANCE = config("PLACEMEASURE_PRODUCT_FORMULA_TOLERANCE", default=1e-9, cast=float)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimpleFunction:
    """A function constant on the basis sets of one level and zero off ``values``."""

    level: Level
    values: Dict[Place, MapValue] = field(default_factory=dict)

    def __post_init__(self):
        for place in self.values:
            if place.level != self.level:
                raise NotAnElement(f"value at {place} is not at level {self.level}", witness=place)
        object.__setattr__(self, "values", {w: v for w, v in self.values.items() if not v.is_zero()})

    def support(self) -> RSet:
        return RSet(self.level, frozenset(self.values))

    def lift(self, superlevel: Level) -> "SimpleFunction":
        return SimpleFunction(superlevel, {
            w: value for place, value in self.values.items() for w in fiber(place, superlevel)
        })

    def scale(self, r: Rational) -> "SimpleFunction":
        return SimpleFunction(self.level, {w: v.scale(r) for w, v in self.values.items()})

    def __add__(self, other: "SimpleFunction") -> "SimpleFunction":
        level = compositum(self.level, other.level)
        left, right = self.lift(level).values, other.lift(level).values
        merged = dict(left)
        for w, v in right.items():
            merged[w] = merged[w] + v if w in merged else v
        return SimpleFunction(level, merged)


ZERO_FUNCTION = SimpleFunction(Level(1))


@dataclass(frozen=True)
class RationalElement:
    """A nonzero rational q; only |q| matters."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value == 0:
            raise ZeroElement("0 is not an element of the multiplicative group")

    def simple_function(self) -> SimpleFunction:
        orders: Dict[int, int] = {}
        for p, k in factorint(abs(self.value.numerator)).items():
            orders[int(p)] = orders.get(int(p), 0) + int(k)
        for p, k in factorint(self.value.denominator).items():
            orders[int(p)] = orders.get(int(p), 0) - int(k)
        # log||q||_p = -ord_p(q) log p and log|q| = sum of ord_p(q) log p
        values: Dict[Place, MapValue] = {
            Place(Level(1), RationalPlace(p), 0): LogLinear.of(0, {p: -k}) for p, k in orders.items()
        }
        values[Place(Level(1), INFINITY, 0)] = LogLinear.of(0, orders)
        return SimpleFunction(Level(1), values)


@dataclass(frozen=True)
class CyclotomicUnit:
    """The class of 1 - zeta_p for an odd prime p."""

    prime: int

    def __post_init__(self):
        if not isinstance(self.prime, int) or self.prime < 3 or not isprime(self.prime):
            raise BadPrime(f"{self.prime!r} is not an odd prime")

    def simple_function(self) -> SimpleFunction:
        p = self.prime
        level = Level(p)
        values: Dict[Place, MapValue] = {Place(level, RationalPlace(p), 0): FloatValue(-math.log(p) / (p - 1))}
        for place in places_above(level, INFINITY):
            values[place] = FloatValue(math.log(2 * math.sin(math.pi * place.rep / p)))
        return SimpleFunction(level, values)


@dataclass(frozen=True)
class ExplicitElement:
    """An element given by its function; rejected unless the product formula holds."""

    function: SimpleFunction

    def __post_init__(self):
        if not product_formula_check(self.function):
            raise NotAnElement("the lambda-integral of the function is not zero")

    def simple_function(self) -> SimpleFunction:
        return self.function


AlgebraicElement = Union[RationalElement, CyclotomicUnit, ExplicitElement]


def f_alpha(alpha: AlgebraicElement) -> SimpleFunction:
    return alpha.simple_function()


def integrate(f: SimpleFunction, c: ConsistentMap) -> MapValue:
    if not c.validated:
        raise NotValidated(f"map {c.name} has not been validated")
    return sum_values(multiply(f.values[place], evaluate(c, place)) for place in sorted(f.values))


def phi(c: ConsistentMap, alpha: AlgebraicElement) -> MapValue:
    """Phi_c(alpha): the sum over places of c(K, v) * log||alpha||_v."""
    return integrate(f_alpha(alpha), c)


def product_formula_check(f: SimpleFunction) -> bool:
    total = integrate(f, LAMBDA)
    holds = is_negligible(total, PRODUCT_FORMULA_TOLERANCE)
    if not holds:
        logger.debug("lambda-integral %s is not zero", total)
    return holds
