"""Seeded generators for random places, sets, maps and partitions."""

import random
from fractions import Fraction
from typing import Dict, List

import pytest

from consistent_maps import (
    OMEGA,
    BaseAssignment,
    ConsistentMap,
    OverrideChain,
    OverrideLevel,
    Tail,
    TailFamily,
    add_maps,
    from_spec,
    scale_map,
)
from cyclotomic_tower import INFINITY, Level, Place, RationalPlace, compositum, fiber, places_above
from global_measure import Partition, make_partition
from map_values import ExactRational, MapValue
from place_sets import RSet, lift, reduce

LEVELS = [3, 4, 5, 7, 8, 9, 12, 15, 21]
BASES = [INFINITY] + [RationalPlace(p) for p in (2, 3, 5, 7, 11, 13)]


def random_fraction(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 4))


def random_level(rng: random.Random) -> Level:
    return Level(rng.choice([1] + LEVELS))


def random_multiple(rng: random.Random, level: Level) -> Level:
    return compositum(level, Level(rng.choice(LEVELS)))


def random_place(rng: random.Random) -> Place:
    return rng.choice(places_above(random_level(rng), rng.choice(BASES)))


def random_rset(rng: random.Random) -> RSet:
    level = random_level(rng)
    places = set()
    for base in rng.sample(BASES, rng.randint(1, 3)):
        above = places_above(level, base)
        places.update(rng.sample(above, rng.randint(1, len(above))))
    return reduce(RSet(level, frozenset(places)))


def _split(rng: random.Random, total: MapValue, k: int) -> List[MapValue]:
    pieces = [ExactRational(random_fraction(rng)) for _ in range(k - 1)]
    rest = total
    for piece in pieces:
        rest = rest - piece
    return pieces + [rest]


def random_exact_map(rng: random.Random, globally_consistent: bool = True) -> ConsistentMap:
    """A map whose values are all exact rationals, with an override chain most of the time."""
    table = {base: ExactRational(random_fraction(rng)) for base in rng.sample(BASES, rng.randint(0, 3))}
    if globally_consistent:
        tail = Tail.of({TailFamily.CONST_LAMBDA: rng.choice([0, 0, 1, -1, Fraction(1, 2)])})
    else:
        tail = Tail.of({TailFamily.ALTERNATING_UNIT: rng.choice([1, -2])})
    base = BaseAssignment(table, tail)
    if rng.random() < 0.4:
        return from_spec(base, name="random")

    low = Level(rng.choice([3, 4, 5, 7]))
    levels = [low]
    if rng.random() < 0.5:
        m = rng.choice([k for k in (3, 4, 5, 7) if low.conductor % k])
        levels.append(compositum(low, Level(m)))
    layers: List[Dict[Place, MapValue]] = [{} for _ in levels]
    for p in rng.sample(BASES, rng.randint(1, 2)):
        sources = {Place(Level(1), p, 0): base.value_at(p)}
        for layer, level in zip(layers, levels):
            for v, value in sources.items():
                above = fiber(v, level)
                layer.update(zip(above, _split(rng, value, len(above))))
            sources = {w: layer[w] for w in layer if w.base == p}
    chain = OverrideChain(tuple(OverrideLevel(level, layer) for level, layer in zip(levels, layers)))
    return from_spec(base, chain, name="random")


def random_float_map(rng: random.Random) -> ConsistentMap:
    return add_maps(random_exact_map(rng), scale_map(Fraction(rng.randint(1, 3), 2), OMEGA))


def _random_groups(rng: random.Random, level: Level, places: List[Place]) -> List[RSet]:
    places = list(places)
    rng.shuffle(places)
    cuts = sorted(rng.sample(range(1, len(places)), rng.randint(0, len(places) - 1))) if len(places) > 1 else []
    bounds = [0] + cuts + [len(places)]
    return [RSet(level, frozenset(places[a:b])) for a, b in zip(bounds, bounds[1:])]


def random_partition(rng: random.Random) -> Partition:
    exceptional = {}
    for base in rng.sample(BASES, rng.randint(0, 3)):
        level = Level(rng.choice(LEVELS))
        exceptional[base] = _random_groups(rng, level, places_above(level, base))
    order = rng.sample(BASES, rng.randint(0, 2))
    return make_partition(exceptional, order=order)


def random_refinement(rng: random.Random, delta: Partition) -> Partition:
    """A partition whose parts each lie inside one part of ``delta``."""
    exceptional = {}
    bases = list(delta.exceptional) + [b for b in rng.sample(BASES, 1) if b not in delta.exceptional]
    for base in bases:
        pieces = []
        for part in delta.parts_at(base):
            level = random_multiple(rng, part.level)
            pieces += _random_groups(rng, level, lift(part, level).sorted_places())
        exceptional[base] = pieces
    return make_partition(exceptional)


@pytest.fixture
def rng():
    return random.Random(20240611)
