import math
from fractions import Fraction

from map_values import (
    ZERO,
    ExactRational,
    FloatValue,
    LogLinear,
    RationalOverLog,
    is_negligible,
    multiply,
    sum_values,
    values_agree,
)


def test_exact_kinds_stay_exact():
    assert ExactRational(1) + ExactRational(Fraction(1, 2)) == ExactRational(Fraction(3, 2))
    assert RationalOverLog(-1, 2) + RationalOverLog(Fraction(1, 2), 2) == RationalOverLog(Fraction(-1, 2), 2)
    total = LogLinear.of(0, {2: 1}) + LogLinear.of(0, {2: -1})
    assert isinstance(total, LogLinear) and total.is_zero()
    assert ExactRational(3) + LogLinear.of(0, {3: 1}) == LogLinear.of(3, {3: 1})


def test_incompatible_scales_fall_back_to_float():
    total = RationalOverLog(-1, 2) + RationalOverLog(-1, 3)
    assert isinstance(total, FloatValue)
    assert math.isclose(total.x, -1 / math.log(2) - 1 / math.log(3))
    mixed = ExactRational(1) + RationalOverLog(-1, 2)
    assert isinstance(mixed, FloatValue)
    assert math.isclose(mixed.x, 1 - 1 / math.log(2))


def test_zero_absorbs():
    assert ZERO + RationalOverLog(1, 3) == RationalOverLog(1, 3)
    assert sum_values([]) == ZERO
    assert RationalOverLog(0, 5) + RationalOverLog(2, 7) == RationalOverLog(2, 7)


def test_pairing_rules():
    assert multiply(RationalOverLog(-1, 2), LogLinear.of(0, {2: -2})) == ExactRational(2)
    assert multiply(LogLinear.of(0, {3: -1}), RationalOverLog(-1, 3)) == ExactRational(1)
    assert multiply(ExactRational(2), LogLinear.of(1, {2: 1})) == LogLinear.of(2, {2: 2})
    assert isinstance(multiply(RationalOverLog(1, 2), LogLinear.of(0, {3: 1})), FloatValue)
    assert multiply(ZERO, FloatValue(3.0)) == ZERO


def test_agreement():
    assert values_agree(FloatValue(1.0), ExactRational(1))
    assert not values_agree(FloatValue(1 + 1e-10), ExactRational(1))
    assert values_agree(ExactRational(Fraction(1, 3)), ExactRational(Fraction(2, 6)))
    assert not values_agree(RationalOverLog(1, 2), RationalOverLog(1, 3))
    assert is_negligible(FloatValue(1e-12), 1e-9)
    assert not is_negligible(ExactRational(Fraction(1, 10**20)), 1e-9)


def test_log_linear_evaluation():
    value = LogLinear.of(Fraction(1, 2), {2: 2, 3: 0})
    assert value.coefficients == ((2, Fraction(2)),)
    assert math.isclose(value.to_float(), 0.5 + 2 * math.log(2))
    assert (-value).coefficient(2) == -2
