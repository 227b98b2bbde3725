"""
Consistent maps c(K, v) on the cyclotomic places, described declaratively.

A map is a ``BaseAssignment`` on the places of Q (an explicit table plus a
tail rule for every other place) refined by an ``OverrideChain``: tables at a
divisibility chain of levels, each entry group covering a whole fiber and
summing to the value it refines.  Below the deepest supplied datum values are
spread in proportion to lambda, which keeps every fiber sum intact.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Tuple

from decouple import config

from cyclotomic_tower import (
    INFINITY,
    Level,
    Place,
    RationalPlace,
    compositum,
    fiber,
    lambda_mass,
    places_above,
    restrict,
)
from errors import (
    IncompatibleTails,
    InexactValue,
    InvalidBase,
    InvalidOverride,
    NotAChain,
    NotValidated,
    ParseError,
)
from map_values import (
    ZERO,
    ExactRational,
    MapValue,
    Rational,
    RationalOverLog,
    sum_values,
    values_agree,
)
from place_sets import RSet, basis_set

MEMO_SIZE = config("PLACEMEASURE_MEMO_SIZE", default=4096, cast=int)

logger = logging.getLogger(__name__)


class TailBehaviour(Enum):
    VANISHES = "vanishes"
    PLUS_INFINITY = "plus_infinity"
    MINUS_INFINITY = "minus_infinity"
    CONDITIONAL = "conditional"

    @classmethod
    def from_sign(cls, sign: int) -> "TailBehaviour":
        if sign > 0:
            return cls.PLUS_INFINITY
        if sign < 0:
            return cls.MINUS_INFINITY
        return cls.VANISHES


class TailFamily(Enum):
    """Rules for the rational places outside a base table.

    ``order`` ranks how fast the terms grow: 3 unbounded, 2 bounded away from
    zero, 1 tending to zero but not summable over the primes.
    """

    CONST_LAMBDA = "const_lambda"
    RECIPROCAL_LOG = "reciprocal_log"
    ALTERNATING_UNIT = "alternating_unit"
    PRIME_OVER_LOG = "prime_over_log"

    @property
    def order(self) -> int:
        return {
            TailFamily.PRIME_OVER_LOG: 3,
            TailFamily.CONST_LAMBDA: 2,
            TailFamily.ALTERNATING_UNIT: 2,
            TailFamily.RECIPROCAL_LOG: 1,
        }[self]

    @property
    def needs_infinity_entry(self) -> bool:
        return self in (TailFamily.RECIPROCAL_LOG, TailFamily.PRIME_OVER_LOG)

    def value_at(self, coefficient: Fraction, base: RationalPlace) -> MapValue:
        if self is TailFamily.CONST_LAMBDA:
            return ExactRational(coefficient)
        if self is TailFamily.ALTERNATING_UNIT:
            return ExactRational(coefficient * (-1) ** base.enumeration_index)
        if base.is_infinite:
            raise InvalidBase(f"tail {self.value} has no value at infinity")
        if self is TailFamily.RECIPROCAL_LOG:
            return RationalOverLog(coefficient, base.prime)
        return RationalOverLog(coefficient * base.prime, base.prime)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


@dataclass(frozen=True)
class Tail:
    """A finite linear combination of tail families; empty means the zero tail."""

    terms: Tuple[Tuple[TailFamily, Fraction], ...] = ()

    @classmethod
    def of(cls, coefficients: Mapping[TailFamily, Rational]) -> "Tail":
        terms = {family: Fraction(q) for family, q in coefficients.items() if q != 0}
        return cls(tuple(sorted(terms.items(), key=lambda item: item[0].value)))

    def coefficient(self, family: TailFamily) -> Fraction:
        return dict(self.terms).get(family, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def needs_infinity_entry(self) -> bool:
        return any(family.needs_infinity_entry for family, _ in self.terms)

    def value_at(self, base: RationalPlace) -> MapValue:
        return sum_values(family.value_at(q, base) for family, q in self.terms)

    def __add__(self, other: "Tail") -> "Tail":
        merged: Dict[TailFamily, Fraction] = dict(self.terms)
        for family, q in other.terms:
            merged[family] = merged.get(family, Fraction(0)) + q
        return Tail.of(merged)

    def scale(self, r: Rational) -> "Tail":
        return Tail.of({family: q * r for family, q in self.terms})

    def behaviour(self) -> TailBehaviour:
        """How the series of tail values over all but finitely many rational places behaves.

        Decided from the growth order and sign pattern of each family, never
        numerically: sum 1 and sum 1/log p both diverge, while (-1)^n keeps
        both partial sums unbounded.
        """
        unbounded = self.coefficient(TailFamily.PRIME_OVER_LOG)
        if unbounded:
            return TailBehaviour.from_sign(_sign(unbounded))
        a = self.coefficient(TailFamily.CONST_LAMBDA)
        b = self.coefficient(TailFamily.ALTERNATING_UNIT)
        r = self.coefficient(TailFamily.RECIPROCAL_LOG)
        if a or b:
            if abs(a) > abs(b):
                return TailBehaviour.from_sign(_sign(a))
            if abs(a) < abs(b):
                return TailBehaviour.CONDITIONAL
            # every other term is 2a + r/log p, the rest are r/log p alone
            if r and _sign(r) != _sign(a):
                return TailBehaviour.CONDITIONAL
            return TailBehaviour.from_sign(_sign(a))
        return TailBehaviour.from_sign(_sign(r))


@dataclass(frozen=True)
class BaseAssignment:
    table: Dict[RationalPlace, MapValue] = field(default_factory=dict)
    tail: Tail = Tail()

    def value_at(self, base: RationalPlace) -> MapValue:
        if base in self.table:
            return self.table[base]
        return self.tail.value_at(base)

    def scale(self, r: Rational) -> "BaseAssignment":
        return BaseAssignment({k: v.scale(r) for k, v in self.table.items()}, self.tail.scale(r))


@dataclass(frozen=True)
class OverrideLevel:
    level: Level
    entries: Dict[Place, MapValue] = field(default_factory=dict)


@dataclass(frozen=True)
class OverrideChain:
    levels: Tuple[OverrideLevel, ...] = ()

    @property
    def exceptional(self) -> FrozenSet[RationalPlace]:
        return frozenset(place.base for layer in self.levels for place in layer.entries)

    @property
    def top(self) -> Level:
        return self.levels[-1].level if self.levels else Level(1)

    def scale(self, r: Rational) -> "OverrideChain":
        return OverrideChain(tuple(
            OverrideLevel(layer.level, {w: v.scale(r) for w, v in layer.entries.items()})
            for layer in self.levels
        ))


@dataclass(frozen=True, eq=False)
class ConsistentMap:
    base: BaseAssignment
    overrides: OverrideChain = OverrideChain()
    validated: bool = False
    name: str = "spec"
    _memo: Callable[[Place], MapValue] = field(init=False, repr=False)

    def __post_init__(self):
        # evaluated places are kept per map, least recently used dropped first
        object.__setattr__(self, "_memo", lru_cache(maxsize=MEMO_SIZE)(lambda place: _evaluate(self, place)))

    def memo_size(self) -> int:
        return self._memo.cache_info().currsize

    def __add__(self, other: "ConsistentMap") -> "ConsistentMap":
        return add_maps(self, other)

    def __rmul__(self, r: Rational) -> "ConsistentMap":
        return scale_map(r, self)

    def __neg__(self) -> "ConsistentMap":
        return scale_map(-1, self)


def _validate_base(base: BaseAssignment) -> None:
    if base.tail.needs_infinity_entry and INFINITY not in base.table:
        raise InvalidBase("a log-scaled tail needs an explicit value at infinity", witness=INFINITY)


def _validate_chain(chain: OverrideChain) -> None:
    for lower, upper in zip(chain.levels, chain.levels[1:]):
        if lower.level == upper.level or not lower.level.divides(upper.level):
            raise NotAChain(f"override levels {lower.level} and {upper.level} do not form a chain")


def _source_of(chain: OverrideChain, index: int, place: Place) -> Tuple[Optional[int], Place]:
    """The deepest earlier datum that ``place`` refines: (chain index or None for the base, place)."""
    for j in range(index - 1, -1, -1):
        candidate = restrict(place, chain.levels[j].level)
        if candidate in chain.levels[j].entries:
            return j, candidate
    return None, restrict(place, Level(1))


def _validate_overrides(base: BaseAssignment, chain: OverrideChain) -> None:
    for i, layer in enumerate(chain.levels):
        groups: Dict[Tuple[Optional[int], Place], List[Place]] = defaultdict(list)
        for place in layer.entries:
            if place.level != layer.level:
                raise InvalidOverride(f"entry {place} is not at level {layer.level}", witness=place)
            groups[_source_of(chain, i, place)].append(place)
        for (j, source), members in groups.items():
            expected = fiber(source, layer.level)
            missing = sorted(set(expected) - set(members))
            if missing:
                logger.debug("override at level %s leaves %s uncovered", layer.level, missing[0])
                raise InvalidOverride(
                    f"override at level {layer.level} covers only part of the fiber over {source}",
                    witness=missing[0],
                )
            source_value = base.value_at(source.base) if j is None else chain.levels[j].entries[source]
            total = sum_values(layer.entries[w] for w in sorted(members))
            if not values_agree(total, source_value):
                logger.debug("fiber sum %s differs from %s at %s", total, source_value, source)
                raise InvalidOverride(
                    f"values above {source} at level {layer.level} do not sum to its value",
                    witness=source,
                )


def from_spec(base: BaseAssignment, overrides: OverrideChain = OverrideChain(), name: str = "spec") -> ConsistentMap:
    _validate_base(base)
    _validate_chain(overrides)
    _validate_overrides(base, overrides)
    return ConsistentMap(base, overrides, validated=True, name=name)


LAMBDA = from_spec(BaseAssignment({}, Tail.of({TailFamily.CONST_LAMBDA: 1})), name="lambda")
OMEGA = from_spec(BaseAssignment({INFINITY: ZERO}, Tail.of({TailFamily.RECIPROCAL_LOG: -1})), name="omega")
ALTERNATING = from_spec(BaseAssignment({}, Tail.of({TailFamily.ALTERNATING_UNIT: 1})), name="alternating")
# sum of prime factors with repetition
SOPFR = from_spec(BaseAssignment({INFINITY: ZERO}, Tail.of({TailFamily.PRIME_OVER_LOG: -1})), name="sopfr")

BUILTINS = {m.name: m for m in (LAMBDA, OMEGA, ALTERNATING, SOPFR)}


def make_builtin(name: str) -> ConsistentMap:
    try:
        return BUILTINS[name]
    except KeyError:
        raise ParseError(f"unknown builtin map {name!r}; expected one of {sorted(BUILTINS)}")


def completely_additive(prime_values: Mapping[int, Rational], name: str = "additive") -> ConsistentMap:
    """The map in J*_inf whose Phi extends the completely additive g with g(p) = prime_values[p]."""
    table: Dict[RationalPlace, MapValue] = {INFINITY: ZERO}
    for p, g in prime_values.items():
        table[RationalPlace(p)] = RationalOverLog(-Fraction(g), p)
    return from_spec(BaseAssignment(table, Tail()), name=name)


def _spread(c: ConsistentMap, place: Place) -> MapValue:
    # the level of ``place`` is a multiple of every override level here
    for layer in reversed(c.overrides.levels):
        source = restrict(place, layer.level)
        if source in layer.entries:
            return layer.entries[source].scale(lambda_mass(place) / lambda_mass(source))
    return c.base.value_at(place.base).scale(lambda_mass(place))


def _evaluate(c: ConsistentMap, place: Place) -> MapValue:
    if place.base not in c.overrides.exceptional:
        value = c.base.value_at(place.base).scale(lambda_mass(place))
    elif c.overrides.top.divides(place.level):
        value = _spread(c, place)
    else:
        common = compositum(place.level, c.overrides.top)
        value = sum_values(_spread(c, w) for w in fiber(place, common))
    return value


def evaluate(c: ConsistentMap, place: Place) -> MapValue:
    if not c.validated:
        raise NotValidated(f"map {c.name} has not been validated")
    return c._memo(place)


def charge(c: ConsistentMap, a: RSet) -> MapValue:
    """mu(A): the sum of c over the places of A."""
    if not c.validated:
        raise NotValidated(f"map {c.name} has not been validated")
    return sum_values(evaluate(c, place) for place in a.sorted_places())


def check_consistency(c: ConsistentMap, place: Place, superlevel: Level) -> bool:
    return values_agree(evaluate(c, place), sum_values(evaluate(c, w) for w in fiber(place, superlevel)))


def add_maps(c: ConsistentMap, d: ConsistentMap) -> ConsistentMap:
    if not (c.validated and d.validated):
        raise NotValidated("both operands must be validated")
    keys = set(c.base.table) | set(d.base.table)
    table = {k: c.base.value_at(k) + d.base.value_at(k) for k in keys}
    tail = c.base.tail + d.base.tail
    if tail.needs_infinity_entry and INFINITY not in table:
        raise IncompatibleTails("merged tail needs a value at infinity that neither map supplies")
    base = BaseAssignment(table, tail)
    exceptional = sorted(c.overrides.exceptional | d.overrides.exceptional)
    if not exceptional:
        return from_spec(base, name=f"{c.name}+{d.name}")
    # one layer at the common top level carries both sets of refinements
    top = compositum(c.overrides.top, d.overrides.top)
    entries = {
        w: evaluate(c, w) + evaluate(d, w)
        for p in exceptional
        for w in places_above(top, p)
    }
    return from_spec(base, OverrideChain((OverrideLevel(top, entries),)), name=f"{c.name}+{d.name}")


def scale_map(r: Rational, c: ConsistentMap) -> ConsistentMap:
    if not c.validated:
        raise NotValidated(f"map {c.name} has not been validated")
    return from_spec(c.base.scale(r), c.overrides.scale(r), name=f"{r}*{c.name}")


def infinity_zero(c: ConsistentMap) -> bool:
    return evaluate(c, Place(Level(1), INFINITY, 0)).is_zero()


def normalize_at_infinity(c: ConsistentMap) -> ConsistentMap:
    """c - c(Q, inf) * lambda, which has the same Phi and vanishes at infinity."""
    at_infinity = evaluate(c, Place(Level(1), INFINITY, 0))
    if not isinstance(at_infinity, ExactRational):
        raise InexactValue(f"c(Q, inf) = {at_infinity} is not an exact rational")
    if at_infinity.is_zero():
        return c
    return add_maps(c, scale_map(-at_infinity.q, LAMBDA))


@dataclass(frozen=True)
class RingCharge:
    """The charge mu on R determined by a consistent map."""

    source: ConsistentMap

    def __call__(self, a: RSet) -> MapValue:
        return charge(self.source, a)

    def restrict_to_basis(self, place: Place) -> MapValue:
        """c_mu(K, v) = mu(Y(K, v))."""
        return self(basis_set(place))


class MapOp(Enum):
    ADD = "add"
    SCALE = "scale"


def combine(op: MapOp, first, second: ConsistentMap) -> ConsistentMap:
    """add(c, d) or scale(r, c); for SCALE ``first`` is the rational factor."""
    if op is MapOp.ADD:
        return add_maps(first, second)
    return scale_map(first, second)
