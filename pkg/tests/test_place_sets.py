import pytest

from conftest import BASES, random_multiple, random_rset
from cyclotomic_tower import INFINITY, Level, Place, RationalPlace, compositum, fiber_size, places_above
from errors import BadPlace
from place_sets import (
    EMPTY,
    WHOLE,
    ASet,
    Polarity,
    Relation,
    RSet,
    SetOp,
    basis_set,
    combine,
    compare,
    complement,
    contains_place,
    disjoint_decomposition,
    fiber_set,
    in_ring,
    lift,
    reduce,
    slice_above,
)

TWO, THREE, FIVE = RationalPlace(2), RationalPlace(3), RationalPlace(5)
L7 = Level(7)
Y2 = fiber_set(TWO)
Y3 = fiber_set(THREE)


def single(level, base, rep):
    return RSet(level, frozenset([Place(level, base, rep)]))


def test_lift_and_reduce_round_trip():
    lifted = lift(Y2, L7)
    assert lifted.places == frozenset({Place(L7, TWO, 1), Place(L7, TWO, 3)})
    assert reduce(lifted) == Y2


def test_compare_is_representation_independent():
    assert compare(ASet(Y2), ASet(lift(Y2, L7))) is Relation.EQUAL
    assert compare(ASet(single(L7, TWO, 1)), ASet(Y2)) is Relation.SUBSET
    assert compare(ASet(Y2), ASet(single(L7, TWO, 1))) is Relation.SUPERSET
    assert compare(ASet(Y2), ASet(Y3)) is Relation.DISJOINT
    assert compare(complement(ASet(Y2)), complement(ASet(Y3))) is Relation.OVERLAPPING
    assert compare(ASet(EMPTY), ASet(Y2)) is Relation.SUBSET


def test_intersection_lifts_to_the_compositum():
    meet = combine(SetOp.INTERSECT, ASet(Y2), ASet(single(L7, TWO, 1)))
    assert meet == ASet(single(L7, TWO, 1))


def test_polarity_cases():
    not_two = complement(ASet(Y2))
    assert combine(SetOp.UNION, ASet(Y2), not_two) == WHOLE
    assert combine(SetOp.INTERSECT, ASet(Y2), not_two).is_empty
    assert combine(SetOp.UNION, not_two, complement(ASet(Y3))) == WHOLE
    assert combine(SetOp.INTERSECT, not_two, complement(ASet(Y3))) == complement(
        combine(SetOp.UNION, ASet(Y2), ASet(Y3))
    )
    assert combine(SetOp.DIFFERENCE, WHOLE, ASet(Y2)) == not_two
    assert combine(SetOp.DIFFERENCE, ASet(Y2), WHOLE).is_empty


def test_complement():
    assert complement(ASet(EMPTY)) == WHOLE
    assert complement(complement(ASet(Y2))) == ASet(Y2)
    assert complement(ASet(Y2)).polarity is Polarity.COMPLEMENTED
    assert not in_ring(complement(ASet(Y2)))
    assert not in_ring(WHOLE)
    assert in_ring(ASet(Y2))


def test_disjoint_decomposition_absorbs_containment():
    assert disjoint_decomposition([Place(Level(1), TWO, 0), Place(L7, TWO, 1)]) == Y2
    assert disjoint_decomposition([Place(L7, TWO, 1), Place(L7, TWO, 3)]) == Y2
    assert disjoint_decomposition([]) == EMPTY


def test_places_must_sit_at_the_set_level():
    with pytest.raises(BadPlace):
        RSet(L7, frozenset([Place(Level(1), TWO, 0)]))


def test_slices_and_membership():
    not_two = complement(ASet(Y2))
    assert slice_above(not_two, TWO).is_empty
    assert slice_above(not_two, THREE) == Y3
    assert contains_place(not_two, Place(Level(1), THREE, 0))
    assert not contains_place(not_two, Place(L7, TWO, 3))
    assert basis_set(Place(L7, TWO, 1)) == single(L7, TWO, 1)


def member(x, place):
    return (place in lift(x.core, place.level).places) != x.is_complemented


def expected_member(kind, left, right):
    return {
        SetOp.UNION: left or right,
        SetOp.INTERSECT: left and right,
        SetOp.DIFFERENCE: left and not right,
    }[kind]


def random_aset(rng):
    polarity = rng.choice(list(Polarity))
    return ASet(random_rset(rng), polarity)


def test_combine_agrees_placewise(rng):
    bases = BASES + [RationalPlace(17)]
    for _ in range(300):
        a, b = random_aset(rng), random_aset(rng)
        for kind in SetOp:
            result = combine(kind, a, b)
            level = compositum(compositum(a.core.level, b.core.level), result.core.level)
            for base in bases:
                for w in places_above(level, base):
                    assert member(result, w) == expected_member(kind, member(a, w), member(b, w))


def test_boolean_laws(rng):
    for _ in range(100):
        a, b, c = (ASet(random_rset(rng)) for _ in range(3))
        assert combine(SetOp.UNION, a, b) == combine(SetOp.UNION, b, a)
        assert combine(SetOp.INTERSECT, a, combine(SetOp.INTERSECT, b, c)) == combine(
            SetOp.INTERSECT, combine(SetOp.INTERSECT, a, b), c
        )
        assert complement(combine(SetOp.UNION, a, b)) == combine(
            SetOp.INTERSECT, complement(a), complement(b)
        )
        assert complement(combine(SetOp.INTERSECT, a, complement(b))) == combine(
            SetOp.UNION, complement(a), b
        )


def test_reduce_is_canonical(rng):
    for _ in range(200):
        a = random_rset(rng)
        assert reduce(lift(a, random_multiple(rng, a.level))) == a
        assert disjoint_decomposition(a.sorted_places()) == a


def test_disjoint_basis_sets_merge_into_a_finite_set():
    level = Level(15)
    parts = [place for p in (TWO, RationalPlace(7), RationalPlace(11)) for place in places_above(level, p)]
    merged = disjoint_decomposition(parts)
    assert len(lift(merged, level).places) == len(parts)
    expected = sum(fiber_size(Level(1), level, p) for p in (TWO, RationalPlace(7), RationalPlace(11)))
    assert len(parts) == expected


def test_whole_space_contains_infinity_fiber():
    assert contains_place(WHOLE, Place(Level(1), INFINITY, 0))
    assert slice_above(ASet(Y2), FIVE).is_empty
