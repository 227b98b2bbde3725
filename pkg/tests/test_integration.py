import math
from fractions import Fraction

import pytest

from consistent_maps import LAMBDA, OMEGA, SOPFR, BaseAssignment, completely_additive, from_spec, normalize_at_infinity
from cyclotomic_tower import INFINITY, Level, Place, RationalPlace
from errors import BadPrime, NotAnElement, ZeroElement
from integration import (
    ZERO_FUNCTION,
    CyclotomicUnit,
    ExplicitElement,
    RationalElement,
    SimpleFunction,
    f_alpha,
    integrate,
    phi,
    product_formula_check,
)
from map_values import ExactRational, FloatValue, LogLinear

L1 = Level(1)


def at(base, level=L1, rep=0):
    return Place(level, base, rep)


def test_f_alpha_of_a_rational():
    f = f_alpha(RationalElement(12))
    assert f.level == L1
    assert f.values == {
        at(RationalPlace(2)): LogLinear.of(0, {2: -2}),
        at(RationalPlace(3)): LogLinear.of(0, {3: -1}),
        at(INFINITY): LogLinear.of(0, {2: 2, 3: 1}),
    }
    assert f_alpha(RationalElement(-12)).values == f.values
    assert f_alpha(RationalElement(Fraction(3, 4))).values[at(RationalPlace(2))] == LogLinear.of(0, {2: 2})


def test_f_alpha_of_a_cyclotomic_unit():
    f = f_alpha(CyclotomicUnit(5))
    assert f.level == Level(5)
    assert math.isclose(f.values[Place(Level(5), RationalPlace(5), 0)].to_float(), -math.log(5) / 4)
    assert math.isclose(f.values[Place(Level(5), INFINITY, 1)].to_float(), math.log(2 * math.sin(math.pi / 5)))
    assert math.isclose(f.values[Place(Level(5), INFINITY, 2)].to_float(), math.log(2 * math.sin(2 * math.pi / 5)))


def test_invalid_elements():
    with pytest.raises(ZeroElement):
        RationalElement(0)
    with pytest.raises(BadPrime):
        CyclotomicUnit(2)
    with pytest.raises(BadPrime):
        CyclotomicUnit(9)
    with pytest.raises(NotAnElement):
        ExplicitElement(SimpleFunction(L1, {at(RationalPlace(2)): LogLinear.of(0, {2: 1})}))


def test_integrals_against_lambda_vanish():
    total = integrate(f_alpha(RationalElement(2)), LAMBDA)
    assert isinstance(total, LogLinear) and total.is_zero()
    assert integrate(ZERO_FUNCTION, OMEGA).is_zero()
    unit = integrate(f_alpha(CyclotomicUnit(5)), LAMBDA)
    assert isinstance(unit, FloatValue)
    assert abs(unit.x) < 1e-9


def test_phi_of_omega_counts_prime_factors():
    assert phi(OMEGA, RationalElement(12)) == ExactRational(3)
    assert phi(OMEGA, RationalElement(1)).is_zero()
    assert phi(OMEGA, RationalElement(Fraction(1, 8))) == ExactRational(-3)


def test_phi_of_sopfr_sums_prime_factors():
    assert phi(SOPFR, RationalElement(12)) == ExactRational(7)
    assert phi(SOPFR, RationalElement(30)) == ExactRational(10)


def test_completely_additive_maps():
    g = completely_additive({2: 1, 3: 2})
    assert phi(g, RationalElement(12)) == ExactRational(4)
    assert phi(g, RationalElement(5)).is_zero()


def test_phi_is_completely_additive():
    for q1, q2 in [(12, 35), (Fraction(2, 9), 49), (Fraction(-5, 8), Fraction(3, 11))]:
        product = phi(OMEGA, RationalElement(Fraction(q1) * Fraction(q2)))
        assert product == phi(OMEGA, RationalElement(q1)) + phi(OMEGA, RationalElement(q2))


def test_lift_invariance():
    f = f_alpha(RationalElement(360))
    for level in (Level(3), Level(12), Level(20)):
        assert integrate(f.lift(level), OMEGA) == integrate(f, OMEGA)
        assert integrate(f.lift(level), LAMBDA).is_zero()


def test_linearity():
    f, g = f_alpha(RationalElement(6)), f_alpha(RationalElement(10))
    assert integrate(f + g, OMEGA) == integrate(f, OMEGA) + integrate(g, OMEGA)
    assert (f + g).values == f_alpha(RationalElement(60)).values
    assert integrate(f.scale(3), OMEGA) == ExactRational(6)
    assert len(f_alpha(RationalElement(12)).support().places) == 3


def test_normalizing_at_infinity_keeps_phi():
    c = from_spec(BaseAssignment({INFINITY: ExactRational(1), RationalPlace(2): ExactRational(-3)}))
    for q in (12, Fraction(5, 6), 97):
        assert phi(normalize_at_infinity(c), RationalElement(q)) == phi(c, RationalElement(q))


def test_product_formula_check():
    assert product_formula_check(f_alpha(RationalElement(30)))
    assert product_formula_check(f_alpha(CyclotomicUnit(7)))
    assert not product_formula_check(SimpleFunction(L1, {at(RationalPlace(2)): LogLinear.of(0, {2: 1})}))


def test_explicit_elements():
    f = SimpleFunction(L1, {
        at(RationalPlace(5)): LogLinear.of(0, {5: -1}),
        at(INFINITY): LogLinear.of(0, {5: 1}),
    })
    assert phi(OMEGA, ExplicitElement(f)) == ExactRational(1)
    roots_of_unity = ExplicitElement(ZERO_FUNCTION)
    assert phi(LAMBDA, roots_of_unity).is_zero()
