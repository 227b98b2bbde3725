"""
The directed system of cyclotomic fields Q(zeta_n) and their places.

A place of Q(zeta_n) above a rational prime p is a coset of the decomposition
group in (Z/nZ)*.  Writing n = p^a * m with p not dividing m, the places above
p are the cosets of <p> in (Z/mZ)*; the places above infinity are the cosets
of {+1, -1} in (Z/nZ)*.  Every coset is named by its least element, so equal
places always compare equal.
"""

import abc
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd
from typing import Dict, Iterator, List, Optional, Tuple

from sympy import divisors, isprime, multiplicity, n_order, nextprime, prime, primepi, totient

from errors import BadLevel, BadPlace, LevelNotDivisible

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _prime_index(p: int) -> int:
    return int(primepi(p))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return int(totient(n))


@dataclass(frozen=True, order=True)
class Level:
    """A cyclotomic field Q(zeta_n), named by its canonical conductor."""

    conductor: int

    def __post_init__(self):
        n = self.conductor
        if not isinstance(n, int) or n < 1 or n % 4 == 2:
            raise BadLevel(f"conductor {n!r} is not canonical (need 1 or n >= 3 with n != 2 mod 4)")

    @property
    def degree(self) -> int:
        return euler_phi(self.conductor)

    def divides(self, other: "Level") -> bool:
        return other.conductor % self.conductor == 0

    def __str__(self) -> str:
        return str(self.conductor)


@total_ordering
@dataclass(frozen=True)
class RationalPlace:
    """A place of Q: a prime p, or infinity when ``prime`` is None."""

    prime: Optional[int] = None

    def __post_init__(self):
        if self.prime is not None and not (isinstance(self.prime, int) and isprime(self.prime)):
            raise BadPlace(f"{self.prime!r} is not a prime")

    @classmethod
    def infinite(cls) -> "RationalPlace":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "RationalPlace":
        return cls(p)

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    @property
    def enumeration_index(self) -> int:
        """Position in the fixed enumeration p_1 = inf, p_2 = 2, p_3 = 3, p_4 = 5, ..."""
        if self.prime is None:
            return 1
        return _prime_index(self.prime) + 1

    def __lt__(self, other: "RationalPlace") -> bool:
        return self.enumeration_index < other.enumeration_index

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)


INFINITY = RationalPlace.infinite()


def rational_place_at(index: int) -> RationalPlace:
    if index < 1:
        raise ValueError("enumeration starts at 1")
    return INFINITY if index == 1 else RationalPlace(int(prime(index - 1)))


def iter_rational_places() -> Iterator[RationalPlace]:
    """Yield inf, 2, 3, 5, 7, ... without end."""
    yield INFINITY
    p = 2
    while True:
        yield RationalPlace(p)
        p = int(nextprime(p))


@dataclass(frozen=True, order=True)
class Place:
    level: Level
    base: RationalPlace
    rep: int

    def __str__(self) -> str:
        return f"{self.level.conductor}:{self.base}:{self.rep}"


def canonical_conductor(n: int) -> Level:
    if not isinstance(n, int) or n < 1:
        raise BadLevel(f"conductor must be a positive integer, got {n!r}")
    if n % 4 == 2:
        n //= 2
    return Level(n)


def compositum(a: Level, b: Level) -> Level:
    return canonical_conductor(a.conductor * b.conductor // gcd(a.conductor, b.conductor))


@lru_cache(maxsize=None)
def canonical_divisors(conductor: int) -> Tuple[Level, ...]:
    """Canonical levels dividing ``conductor``, smallest first."""
    return tuple(sorted({canonical_conductor(int(d)) for d in divisors(conductor)}))


@lru_cache(maxsize=None)
def _split(n: int, p: int) -> Tuple[int, int]:
    # n = p^a * m with p not dividing m
    a = int(multiplicity(p, n))
    return a, n // p**a


@lru_cache(maxsize=None)
def _frobenius_cosets(modulus: int, p: int) -> Dict[int, int]:
    """Map each unit mod ``modulus`` to the least element of its <p>-coset."""
    if modulus == 1:
        return {0: 0}
    table: Dict[int, int] = {}
    for unit in range(1, modulus):
        if unit in table or gcd(unit, modulus) != 1:
            continue
        x = unit
        while x not in table:
            table[x] = unit
            x = x * p % modulus
    return table


def _fold_sign(a: int, n: int) -> int:
    if n == 1:
        return 0
    a %= n
    return min(a, n - a)


@lru_cache(maxsize=None)
def _places_above(level: Level, base: RationalPlace) -> Tuple[Place, ...]:
    n = level.conductor
    if base.is_infinite:
        reps = {_fold_sign(a, n) for a in range(1, n) if gcd(a, n) == 1} if n > 1 else {0}
    else:
        _, m = _split(n, base.prime)
        reps = set(_frobenius_cosets(m, base.prime).values())
    return tuple(Place(level, base, rep) for rep in sorted(reps))


def places_above(level: Level, base: RationalPlace) -> List[Place]:
    return list(_places_above(level, base))


@lru_cache(maxsize=None)
def _local_degree(n: int, p: Optional[int]) -> int:
    if p is None:
        return 1 if n == 1 else 2
    a, m = _split(n, p)
    e = euler_phi(p**a)
    f = int(n_order(p, m)) if m > 1 else 1
    return e * f


def local_degree(place: Place) -> int:
    """[K_v : Q_p] = e * f for the place ``place`` of K = Q(zeta_n)."""
    return _local_degree(place.level.conductor, place.base.prime)


def lambda_mass(place: Place) -> Fraction:
    """The normalized local degree [K_v:Q_v]/[K:Q]."""
    return Fraction(local_degree(place), place.level.degree)


def make_place(level: Level, base: RationalPlace, rep: int) -> Place:
    """Build a place from user data, rejecting representatives that are not coset minima."""
    n = level.conductor
    if base.is_infinite:
        valid = rep == 0 if n == 1 else (1 <= rep <= n // 2 and gcd(rep, n) == 1)
    else:
        _, m = _split(n, base.prime)
        valid = _frobenius_cosets(m, base.prime).get(rep) == rep
    if not valid:
        raise BadPlace(f"{rep} is not a canonical coset representative at level {n} above {base}")
    return Place(level, base, rep)


def restrict(place: Place, sublevel: Level) -> Place:
    n, d = place.level.conductor, sublevel.conductor
    if n % d:
        raise LevelNotDivisible(f"level {d} does not divide {n}", witness=place)
    if d == n:
        return place
    if place.base.is_infinite:
        return Place(sublevel, place.base, _fold_sign(place.rep, d))
    p = place.base.prime
    _, m = _split(d, p)
    return Place(sublevel, place.base, _frobenius_cosets(m, p)[place.rep % m] if m > 1 else 0)


@lru_cache(maxsize=None)
def _fiber_table(level: Level, superlevel: Level, base: RationalPlace) -> Dict[Place, Tuple[Place, ...]]:
    table: Dict[Place, List[Place]] = {v: [] for v in _places_above(level, base)}
    for w in _places_above(superlevel, base):
        table[restrict(w, level)].append(w)
    return {v: tuple(ws) for v, ws in table.items()}


def fiber(place: Place, superlevel: Level) -> List[Place]:
    """The places of ``superlevel`` lying above ``place``."""
    if superlevel.conductor % place.level.conductor:
        raise LevelNotDivisible(
            f"level {place.level} does not divide {superlevel}", witness=place
        )
    return list(_fiber_table(place.level, superlevel, place.base)[place])


def fiber_size(level: Level, superlevel: Level, base: RationalPlace) -> int:
    """Common size of all fibers from ``level`` up to ``superlevel`` above ``base``."""
    return len(_places_above(superlevel, base)) // len(_places_above(level, base))


class TowerProvider(abc.ABC):
    """A computable directed system of number fields with exact place splitting."""

    @abc.abstractmethod
    def places_above(self, level: Level, base: RationalPlace) -> List[Place]:
        ...

    @abc.abstractmethod
    def local_degree(self, place: Place) -> int:
        ...

    @abc.abstractmethod
    def restrict(self, place: Place, sublevel: Level) -> Place:
        ...

    @abc.abstractmethod
    def fiber(self, place: Place, superlevel: Level) -> List[Place]:
        ...

    @abc.abstractmethod
    def compositum(self, a: Level, b: Level) -> Level:
        ...

    @abc.abstractmethod
    def global_degree(self, level: Level) -> int:
        ...

    def degree_sum_holds(self, place: Place, superlevel: Level) -> bool:
        """Sum of local degrees over the fiber equals local_degree(place) * [L:K]."""
        total = sum(self.local_degree(w) for w in self.fiber(place, superlevel))
        expected = Fraction(self.local_degree(place) * self.global_degree(superlevel),
                            self.global_degree(place.level))
        return total == expected


class CyclotomicTower(TowerProvider):
    def places_above(self, level: Level, base: RationalPlace) -> List[Place]:
        return places_above(level, base)

    def local_degree(self, place: Place) -> int:
        return local_degree(place)

    def restrict(self, place: Place, sublevel: Level) -> Place:
        return restrict(place, sublevel)

    def fiber(self, place: Place, superlevel: Level) -> List[Place]:
        return fiber(place, superlevel)

    def compositum(self, a: Level, b: Level) -> Level:
        return compositum(a, b)

    def global_degree(self, level: Level) -> int:
        return level.degree


DEFAULT_TOWER = CyclotomicTower()
