from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from einstein_sp.errors import DivByZero, InvalidInterval
from einstein_sp.interval import Interval


def intervals():
    return st.tuples(rationals(), rationals()).map(lambda t: Interval(min(t), max(t)))


def members(iv: Interval):
    return st.fractions(min_value=iv.lo, max_value=iv.hi, max_denominator=50).filter(iv.contains)


def test_empty_rejected():
    with pytest.raises(InvalidInterval):
        Interval(2, 1)


def test_point_interval():
    iv = Interval(Fraction(1, 3))
    assert iv.width == 0 and iv.mid == Fraction(1, 3)


def test_reciprocal_through_zero():
    with pytest.raises(DivByZero):
        Interval(-1, 1).reciprocal()


def test_even_power_through_zero():
    assert Interval(-2, 1) ** 2 == Interval(0, 4)
    assert Interval(-2, 1) ** 3 == Interval(-8, 1)


def test_mixed_with_scalars():
    assert 1 - Interval(1, 2) == Interval(-1, 0)
    assert 2 / Interval(1, 2) == Interval(1, 2)


@given(intervals(), intervals(), st.data())
def test_operations_enclose_pointwise_results(a, b, data):
    x = data.draw(members(a))
    y = data.draw(members(b))
    assert (a + b).contains(x + y)
    assert (a - b).contains(x - y)
    assert (a * b).contains(x * y)
    assert (a ** 2).contains(x ** 2)
    if not b.contains_zero():
        assert (a / b).contains(x / y)


@given(intervals(), intervals())
def test_hull_contains_both(a, b):
    h = a.hull(b)
    assert h.lo <= min(a.lo, b.lo) and h.hi >= max(a.hi, b.hi)
