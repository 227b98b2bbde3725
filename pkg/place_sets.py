"""
The ring R of finite unions of basis sets Y(K, v) and the algebra A = R u R-bar.

An ``RSet`` stores the places of one level whose basis sets make up the set;
``reduce`` moves it to the least level at which the place set is a union of
whole fibers, so two RSets describe the same subset of Y exactly when they are
equal.  An ``ASet`` adds a polarity flag: a complemented ASet stands for
Y minus its core and is never compact.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import reduce as fold
from typing import Dict, FrozenSet, Iterable, List

from cyclotomic_tower import (
    Level,
    Place,
    RationalPlace,
    canonical_divisors,
    compositum,
    fiber,
    fiber_size,
    places_above,
    restrict,
)
from errors import BadPlace, LevelNotDivisible

logger = logging.getLogger(__name__)


class Polarity(Enum):
    POSITIVE = "positive"
    COMPLEMENTED = "complemented"


class SetOp(Enum):
    UNION = "union"
    INTERSECT = "intersect"
    DIFFERENCE = "difference"


class Relation(Enum):
    EQUAL = "equal"
    SUBSET = "subset"
    SUPERSET = "superset"
    DISJOINT = "disjoint"
    OVERLAPPING = "overlapping"


@dataclass(frozen=True)
class RSet:
    level: Level
    places: FrozenSet[Place]

    def __post_init__(self):
        for place in self.places:
            if place.level != self.level:
                raise BadPlace(f"place {place} is not at level {self.level}", witness=place)

    @property
    def is_empty(self) -> bool:
        return not self.places

    @property
    def bases(self) -> FrozenSet[RationalPlace]:
        return frozenset(place.base for place in self.places)

    def sorted_places(self) -> List[Place]:
        return sorted(self.places)

    def __str__(self) -> str:
        return "[" + ", ".join(str(place) for place in self.sorted_places()) + "]"


EMPTY = RSet(Level(1), frozenset())


@dataclass(frozen=True)
class ASet:
    core: RSet
    polarity: Polarity = Polarity.POSITIVE

    @property
    def is_complemented(self) -> bool:
        return self.polarity is Polarity.COMPLEMENTED

    @property
    def is_empty(self) -> bool:
        return not self.is_complemented and self.core.is_empty

    def __str__(self) -> str:
        return ("~" if self.is_complemented else "") + str(self.core)


WHOLE = ASet(EMPTY, Polarity.COMPLEMENTED)


def _group_by_base(places: Iterable[Place]) -> Dict[RationalPlace, List[Place]]:
    groups: Dict[RationalPlace, List[Place]] = defaultdict(list)
    for place in places:
        groups[place.base].append(place)
    return groups


def reduce(a: RSet) -> RSet:
    """Move ``a`` to the least level at which its places form whole fibers."""
    if a.is_empty:
        return EMPTY
    groups = _group_by_base(a.places)
    for level in canonical_divisors(a.level.conductor):
        if level == a.level:
            return a
        restricted = {place: restrict(place, level) for place in a.places}
        saturated = all(
            len({restricted[p] for p in members}) * fiber_size(level, a.level, base) == len(members)
            for base, members in groups.items()
        )
        if saturated:
            return RSet(level, frozenset(restricted.values()))
    return a


def lift(a: RSet, superlevel: Level) -> RSet:
    if not a.level.divides(superlevel):
        raise LevelNotDivisible(f"level {a.level} does not divide {superlevel}")
    if a.level == superlevel:
        return a
    return RSet(superlevel, frozenset(w for v in a.places for w in fiber(v, superlevel)))


def basis_set(place: Place) -> RSet:
    """Y(K, v) for the place v of K."""
    return reduce(RSet(place.level, frozenset([place])))


def _core_op(kind: SetOp, a: RSet, b: RSet) -> RSet:
    level = compositum(a.level, b.level)
    left, right = lift(a, level).places, lift(b, level).places
    if kind is SetOp.UNION:
        places = left | right
    elif kind is SetOp.INTERSECT:
        places = left & right
    else:
        places = left - right
    return reduce(RSet(level, places))


def complement(a: ASet) -> ASet:
    flipped = Polarity.POSITIVE if a.is_complemented else Polarity.COMPLEMENTED
    return ASet(a.core, flipped)


def combine(kind: SetOp, a: ASet, b: ASet) -> ASet:
    # case analysis on the two polarities; every branch is a finite core computation
    if kind is SetOp.DIFFERENCE:
        return combine(SetOp.INTERSECT, a, complement(b))
    A, B = a.core, b.core
    pos, comp = Polarity.POSITIVE, Polarity.COMPLEMENTED
    if kind is SetOp.UNION:
        if not a.is_complemented and not b.is_complemented:
            return ASet(_core_op(SetOp.UNION, A, B), pos)
        if not a.is_complemented:
            return ASet(_core_op(SetOp.DIFFERENCE, B, A), comp)
        if not b.is_complemented:
            return ASet(_core_op(SetOp.DIFFERENCE, A, B), comp)
        return ASet(_core_op(SetOp.INTERSECT, A, B), comp)
    if not a.is_complemented and not b.is_complemented:
        return ASet(_core_op(SetOp.INTERSECT, A, B), pos)
    if not a.is_complemented:
        return ASet(_core_op(SetOp.DIFFERENCE, A, B), pos)
    if not b.is_complemented:
        return ASet(_core_op(SetOp.DIFFERENCE, B, A), pos)
    return ASet(_core_op(SetOp.UNION, A, B), comp)


def union_all(sets: Iterable[ASet]) -> ASet:
    return fold(lambda x, y: combine(SetOp.UNION, x, y), sets, ASet(EMPTY))


def compare(a: ASet, b: ASet) -> Relation:
    a_only = combine(SetOp.DIFFERENCE, a, b).is_empty
    b_only = combine(SetOp.DIFFERENCE, b, a).is_empty
    if a_only and b_only:
        return Relation.EQUAL
    if a_only:
        return Relation.SUBSET
    if b_only:
        return Relation.SUPERSET
    if combine(SetOp.INTERSECT, a, b).is_empty:
        return Relation.DISJOINT
    return Relation.OVERLAPPING


def disjoint_decomposition(parts: List[Place]) -> RSet:
    """The union of the basis sets of ``parts`` in canonical disjoint form."""
    if not parts:
        return EMPTY
    level = fold(compositum, (place.level for place in parts))
    places = frozenset(w for place in parts for w in fiber(place, level))
    return reduce(RSet(level, places))


def in_ring(a: ASet) -> bool:
    return not a.is_complemented


def fiber_set(base: RationalPlace) -> RSet:
    """Y(Q, p) as an RSet."""
    return RSet(Level(1), frozenset(places_above(Level(1), base)))


def slice_above(a: ASet, base: RationalPlace) -> RSet:
    """The part of ``a`` lying above the rational place ``base``; always in R."""
    return combine(SetOp.INTERSECT, a, ASet(fiber_set(base))).core


def contains_place(a: ASet, place: Place) -> bool:
    return combine(SetOp.DIFFERENCE, ASet(basis_set(place)), a).is_empty
