"""
Partitions of Y, unconditional sums of a map over them, and the extension of
its charge from the ring R to the algebra A.

Only finitely many rational places of a ``Partition`` carry explicit parts;
every other place p contributes the slice of the scope above p as one part.
The tail of such a series is therefore the tail rule of the map itself, and
its behaviour is read off the rule instead of being summed numerically.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import chain, islice
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from consistent_maps import ConsistentMap, TailBehaviour, charge
from cyclotomic_tower import RationalPlace, iter_rational_places
from errors import (
    InfiniteContradiction,
    NotAPartition,
    NotARefinement,
    NotDisjoint,
    NotGloballyConsistent,
    NotValidated,
    ScopeMismatch,
)
from map_values import ZERO, MapValue, sum_values, values_agree
from place_sets import (
    WHOLE,
    ASet,
    Relation,
    RSet,
    SetOp,
    combine,
    compare,
    reduce,
    slice_above,
    union_all,
)

logger = logging.getLogger(__name__)


class SeriesTag(Enum):
    FINITE = "finite"
    PLUS_INFINITY = "plus_infinity"
    MINUS_INFINITY = "minus_infinity"
    CONDITIONAL = "conditional"


@dataclass(frozen=True)
class ExtendedValue:
    """A value in [-inf, inf]; adding +inf to -inf is a contradiction."""

    tag: SeriesTag
    value: Optional[MapValue] = None

    def __post_init__(self):
        if self.tag is SeriesTag.CONDITIONAL:
            raise ValueError("an extended value cannot be conditional")

    @classmethod
    def finite(cls, value: MapValue) -> "ExtendedValue":
        return cls(SeriesTag.FINITE, value)

    @classmethod
    def plus_infinity(cls) -> "ExtendedValue":
        return cls(SeriesTag.PLUS_INFINITY)

    @classmethod
    def minus_infinity(cls) -> "ExtendedValue":
        return cls(SeriesTag.MINUS_INFINITY)

    @property
    def is_finite(self) -> bool:
        return self.tag is SeriesTag.FINITE

    def __add__(self, other: "ExtendedValue") -> "ExtendedValue":
        if self.is_finite and other.is_finite:
            return ExtendedValue.finite(self.value + other.value)
        if self.is_finite:
            return other
        if other.is_finite or self.tag is other.tag:
            return self
        raise InfiniteContradiction("+inf and -inf cannot be added")

    def __neg__(self) -> "ExtendedValue":
        if self.is_finite:
            return ExtendedValue.finite(-self.value)
        if self.tag is SeriesTag.PLUS_INFINITY:
            return ExtendedValue.minus_infinity()
        return ExtendedValue.plus_infinity()

    def __sub__(self, other: "ExtendedValue") -> "ExtendedValue":
        return self + (-other)

    def agrees_with(self, other: "ExtendedValue") -> bool:
        if self.tag is not other.tag:
            return False
        return not self.is_finite or values_agree(self.value, other.value)


EXTENDED_ZERO = ExtendedValue.finite(ZERO)


@dataclass(frozen=True)
class Classification:
    tag: SeriesTag
    value: Optional[MapValue] = None

    @property
    def is_conditional(self) -> bool:
        return self.tag is SeriesTag.CONDITIONAL

    def to_extended(self) -> ExtendedValue:
        if self.is_conditional:
            raise NotGloballyConsistent("the series converges only conditionally")
        return ExtendedValue(self.tag, self.value)

    def agrees_with(self, other: "Classification") -> bool:
        if self.tag is not other.tag:
            return False
        return self.tag is not SeriesTag.FINITE or values_agree(self.value, other.value)


def _witness(a: ASet) -> object:
    places = a.core.sorted_places()
    return places[0] if places else None


@dataclass(frozen=True, eq=False)
class Partition:
    """A partition of ``scope``; build it with ``make_partition``."""

    scope: ASet = WHOLE
    exceptional: Dict[RationalPlace, Tuple[RSet, ...]] = field(default_factory=dict)
    order: Tuple[RationalPlace, ...] = ()
    is_basis: bool = True

    @property
    def is_finite(self) -> bool:
        return not self.scope.is_complemented

    def default_part(self, base: RationalPlace) -> RSet:
        return slice_above(self.scope, base)

    def parts_at(self, base: RationalPlace) -> Tuple[RSet, ...]:
        if base in self.exceptional:
            return self.exceptional[base]
        return self._default_parts(base)

    def _default_parts(self, base: RationalPlace) -> Tuple[RSet, ...]:
        part = self.default_part(base)
        return () if part.is_empty else (part,)

    def rational_places(self) -> Iterator[RationalPlace]:
        """Rational places with at least one part: ``order``, then exceptional ones, then the rest."""
        seen = set()
        if self.is_finite:
            rest = iter(sorted(self.scope.core.bases))
        else:
            rest = iter_rational_places()
        for base in chain(self.order, self.exceptional, rest):
            if base in seen:
                continue
            seen.add(base)
            if self.parts_at(base):
                yield base

    def iter_parts(self) -> Iterator[Tuple[RationalPlace, RSet]]:
        for base in self.rational_places():
            for part in self.parts_at(base):
                yield base, part

    def with_order(self, order: Sequence[RationalPlace]) -> "Partition":
        return Partition(self.scope, self.exceptional, tuple(order), self.is_basis)

    def _explicit_parts(self) -> Dict[RationalPlace, frozenset]:
        explicit = {}
        for base, parts in self.exceptional.items():
            if frozenset(parts) != frozenset(self._default_parts(base)):
                explicit[base] = frozenset(parts)
        return explicit

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return compare(self.scope, other.scope) is Relation.EQUAL and \
            self._explicit_parts() == other._explicit_parts()

    __hash__ = None


def _is_basis_part(part: RSet) -> bool:
    return len(part.places) == 1


def make_partition(
    exceptional: Mapping[RationalPlace, Sequence[RSet]] = None,
    scope: ASet = WHOLE,
    order: Sequence[RationalPlace] = (),
) -> Partition:
    exceptional = {base: tuple(reduce(part) for part in parts) for base, parts in (exceptional or {}).items()}
    for base, parts in exceptional.items():
        target = slice_above(scope, base)
        for i, part in enumerate(parts):
            if part.is_empty:
                raise NotAPartition(f"part {i + 1} above {base} is empty")
            if part.bases != {base}:
                stray = next(w for w in part.sorted_places() if w.base != base)
                raise NotAPartition(f"part {part} does not lie above {base}", witness=stray)
            for other in parts[:i]:
                overlap = combine(SetOp.INTERSECT, ASet(part), ASet(other))
                if not overlap.is_empty:
                    logger.debug("parts %s and %s above %s overlap", other, part, base)
                    raise NotAPartition(f"parts above {base} overlap", witness=_witness(overlap))
        covered = union_all(ASet(part) for part in parts)
        gap = combine(SetOp.DIFFERENCE, ASet(target), covered)
        if not gap.is_empty:
            logger.debug("parts above %s leave %s uncovered", base, gap)
            raise NotAPartition(f"parts above {base} do not cover the scope", witness=_witness(gap))
        excess = combine(SetOp.DIFFERENCE, covered, ASet(target))
        if not excess.is_empty:
            raise NotAPartition(f"parts above {base} leave the scope", witness=_witness(excess))

    partition = Partition(scope, exceptional, tuple(dict.fromkeys(order)))
    is_basis = all(_is_basis_part(part) for parts in exceptional.values() for part in parts)
    if is_basis and scope.core.bases:
        # default parts are whole fibers except above the places the scope core touches
        is_basis = all(
            all(_is_basis_part(part) for part in partition.parts_at(base))
            for base in scope.core.bases if base not in exceptional
        )
    return Partition(scope, exceptional, partition.order, is_basis)


CANONICAL = make_partition()


@dataclass(frozen=True)
class Refinement:
    holds: bool
    groups: Dict[Tuple[RationalPlace, int], Tuple[RSet, ...]] = field(default_factory=dict)
    witness: Optional[RSet] = None


def _check_scopes(gamma: Partition, delta: Partition) -> None:
    if compare(gamma.scope, delta.scope) is not Relation.EQUAL:
        raise ScopeMismatch(f"scopes {gamma.scope} and {delta.scope} differ")


def _group(gamma: Partition, base: RationalPlace, part: RSet) -> Tuple[RSet, ...]:
    return tuple(
        piece for piece in gamma.parts_at(base)
        if compare(ASet(piece), ASet(part)) in (Relation.EQUAL, Relation.SUBSET)
    )


def is_refinement(gamma: Partition, delta: Partition) -> Refinement:
    """Whether every part of ``gamma`` lies in a part of ``delta``, with the parts grouped.

    Only the exceptional places of either partition need checking; everywhere
    else both have the same single part, whose group is itself.
    """
    _check_scopes(gamma, delta)
    groups: Dict[Tuple[RationalPlace, int], Tuple[RSet, ...]] = {}
    for base in dict.fromkeys(chain(gamma.exceptional, delta.exceptional)):
        coarse = delta.parts_at(base)
        for piece in gamma.parts_at(base):
            if not any(compare(ASet(piece), ASet(part)) in (Relation.EQUAL, Relation.SUBSET)
                       for part in coarse):
                return Refinement(False, witness=piece)
        for i, part in enumerate(coarse):
            groups[(base, i)] = _group(gamma, base, part)
    return Refinement(True, groups)


def common_refinement(gamma: Partition, delta: Partition) -> Partition:
    _check_scopes(gamma, delta)
    exceptional: Dict[RationalPlace, List[RSet]] = {}
    for base in dict.fromkeys(chain(gamma.exceptional, delta.exceptional)):
        pieces = []
        for a in gamma.parts_at(base):
            for b in delta.parts_at(base):
                meet = combine(SetOp.INTERSECT, ASet(a), ASet(b))
                if not meet.is_empty:
                    pieces.append(meet.core)
        exceptional[base] = pieces
    result = make_partition(exceptional, gamma.scope, gamma.order)
    if not (is_refinement(result, gamma).holds and is_refinement(result, delta).holds):
        raise NotARefinement("the intersections do not refine both partitions")
    return result


def refine_prefix_check(
    c: ConsistentMap,
    gamma: Partition,
    delta: Partition,
    n: int,
    order: Optional[Sequence[RationalPlace]] = None,
) -> bool:
    """Compare prefix sums of c over delta with the matching prefixes over gamma.

    The enumeration of gamma concatenates, part by part of delta, the parts of
    gamma inside it; the n-th prefix over delta must equal the prefix over
    gamma that ends with the n-th group.  Checked for every prefix up to ``n``.
    """
    refinement = is_refinement(gamma, delta)
    if not refinement.holds:
        raise NotARefinement("gamma does not refine delta", witness=refinement.witness)
    sigma = delta.with_order(order) if order is not None else delta
    coarse_total: MapValue = ZERO
    fine_total: MapValue = ZERO
    for k, (base, part) in enumerate(islice(sigma.iter_parts(), n), start=1):
        coarse_total = coarse_total + charge(c, part)
        fine_total = fine_total + sum_values(charge(c, piece) for piece in _group(gamma, base, part))
        if not values_agree(coarse_total, fine_total):
            logger.debug("prefix %d differs: %s against %s", k, coarse_total, fine_total)
            return False
    return True


def _special_places(c: ConsistentMap, gamma: Partition) -> List[RationalPlace]:
    special = set(gamma.exceptional) | set(c.base.table) | c.overrides.exceptional | gamma.scope.core.bases
    return sorted(special)


_BEHAVIOUR_TAGS = {
    TailBehaviour.PLUS_INFINITY: SeriesTag.PLUS_INFINITY,
    TailBehaviour.MINUS_INFINITY: SeriesTag.MINUS_INFINITY,
    TailBehaviour.CONDITIONAL: SeriesTag.CONDITIONAL,
}


def classify_series(c: ConsistentMap, gamma: Partition) -> Classification:
    if not c.validated:
        raise NotValidated(f"map {c.name} has not been validated")
    if gamma.is_finite:
        places = [base for base in gamma.rational_places()]
    else:
        places = _special_places(c, gamma)
    finite_part = sum_values(charge(c, part) for base in places for part in gamma.parts_at(base))
    if gamma.is_finite:
        return Classification(SeriesTag.FINITE, finite_part)
    # the remaining parts are whole fibers Y(Q, p) carrying the tail values
    behaviour = c.base.tail.behaviour()
    if behaviour is TailBehaviour.VANISHES:
        return Classification(SeriesTag.FINITE, finite_part)
    return Classification(_BEHAVIOUR_TAGS[behaviour])


def is_globally_consistent(c: ConsistentMap) -> bool:
    return not classify_series(c, CANONICAL).is_conditional


def index(c: ConsistentMap) -> ExtendedValue:
    """I(c), the sum of c over any partition of Y."""
    return classify_series(c, CANONICAL).to_extended()


def r_extension(c: ConsistentMap, r: ExtendedValue, a: ASet) -> ExtendedValue:
    """The finitely additive extension of the charge of c to A with value r on Y."""
    ring_value = ExtendedValue.finite(charge(c, a.core))
    if a.is_complemented:
        return r - ring_value
    return ring_value


def nu(c: ConsistentMap, a: ASet) -> ExtendedValue:
    return r_extension(c, index(c), a)


def countably_additive(c: ConsistentMap, r: ExtendedValue) -> bool:
    if not is_globally_consistent(c):
        return False
    return index(c).agrees_with(r)


class AdditivityCase(Enum):
    FINITE_RING = "I"
    FINITE_WITH_COMPLEMENT = "II"
    INFINITE_RING = "III"
    IMPOSSIBLE_CONFIGURATION = "IV"


@dataclass(frozen=True)
class AdditivityReport:
    case: AdditivityCase
    holds: bool
    total: Optional[ExtendedValue] = None
    expected: Optional[ExtendedValue] = None
    witness: Optional[RSet] = None

    @property
    def impossible(self) -> bool:
        return self.case is AdditivityCase.IMPOSSIBLE_CONFIGURATION


def _check_disjoint(parts: Sequence[ASet]) -> None:
    for i, a in enumerate(parts):
        for b in parts[:i]:
            meet = combine(SetOp.INTERSECT, a, b)
            if not meet.is_empty:
                raise NotDisjoint(f"{b} and {a} intersect", witness=_witness(meet) or b)


def _finite_family(c: ConsistentMap, parts: Sequence[ASet]) -> AdditivityReport:
    _check_disjoint(parts)
    case = AdditivityCase.FINITE_WITH_COMPLEMENT if any(a.is_complemented for a in parts) \
        else AdditivityCase.FINITE_RING
    total = EXTENDED_ZERO
    for a in parts:
        total = total + nu(c, a)
    expected = nu(c, union_all(parts))
    return AdditivityReport(case, total.agrees_with(expected), total, expected)


def _infinite_family(c: ConsistentMap, partition: Partition, extra: Optional[ASet]) -> AdditivityReport:
    if extra is not None and extra.is_complemented:
        # the complement of a compact set contains all but finitely many fibers,
        # so it must meet some part of the infinite family
        for _, part in partition.iter_parts():
            if not combine(SetOp.INTERSECT, ASet(part), extra).is_empty:
                return AdditivityReport(AdditivityCase.IMPOSSIBLE_CONFIGURATION, False, witness=part)
    compact_extra = extra is not None and not extra.is_complemented and not extra.is_empty
    union = partition.scope
    if compact_extra:
        # a compact part lies over finitely many rational places
        for base in sorted(extra.core.bases):
            for part in partition.parts_at(base):
                meet = combine(SetOp.INTERSECT, ASet(part), extra)
                if not meet.is_empty:
                    raise NotDisjoint(f"{extra} meets the part {part}", witness=_witness(meet))
        union = combine(SetOp.UNION, partition.scope, extra)
    classification = classify_series(c, partition)
    expected = nu(c, union)
    if classification.is_conditional:
        return AdditivityReport(AdditivityCase.INFINITE_RING, False, expected=expected)
    total = classification.to_extended()
    if compact_extra:
        total = total + nu(c, extra)
    return AdditivityReport(AdditivityCase.INFINITE_RING, total.agrees_with(expected), total, expected)


def additivity_check(
    c: ConsistentMap,
    parts: Union[Partition, Sequence[ASet]],
    extra: Optional[ASet] = None,
) -> AdditivityReport:
    """Whether nu(union) is the unconditional sum of nu over disjoint ``parts`` and ``extra``.

    A ``Partition`` with a complemented scope stands for an infinite family of
    compact parts. A complemented ``extra`` can never be disjoint from it, which
    is reported as an impossible configuration; a compact ``extra`` joins the
    family as one more part.
    """
    if not is_globally_consistent(c):
        raise NotGloballyConsistent(f"map {c.name} is not globally consistent")
    if isinstance(parts, Partition) and not parts.is_finite:
        return _infinite_family(c, parts, extra)
    if isinstance(parts, Partition):
        family = [ASet(part) for _, part in parts.iter_parts()]
    else:
        family = list(parts)
    if extra is not None:
        family.append(extra)
    return _finite_family(c, family)
