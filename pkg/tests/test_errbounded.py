import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arithvol.errbounded import ErrBounded

pos = st.floats(min_value=1e-150, max_value=1e150)


def test_constructors():
    x = ErrBounded.from_value(2.0, 1e-10)
    assert x.value == pytest.approx(2.0)
    assert x.rel_err >= 5e-11
    assert ErrBounded.one().value == 1.0
    assert ErrBounded.exact(Fraction(3, 7)).contains(3 / 7)


def test_rejects_degenerate():
    with pytest.raises(ValueError):
        ErrBounded.from_value(0.0)
    with pytest.raises(ValueError):
        ErrBounded.from_value(1.0, 2.0)
    with pytest.raises(ValueError):
        ErrBounded(float("inf"))


def test_overflow_stays_in_log_space():
    big = ErrBounded(1000.0)
    with pytest.raises(OverflowError):
        big.value
    assert big.log10 == pytest.approx(1000 / math.log(10))
    assert big.format(3).endswith("e+434")


@given(pos, pos)
def test_product_encloses(a, b):
    x, y = ErrBounded.from_value(a), ErrBounded.from_value(b)
    exact = math.log(a) + math.log(b)
    assert abs((x * y).log_value - exact) <= (x * y).abs_err_log + 1e-15 * abs(exact)
    q = x / y
    assert abs(q.log_value - (math.log(a) - math.log(b))) <= q.abs_err_log + 1e-15 * abs(exact)


@given(st.floats(min_value=1e-5, max_value=1e5), st.integers(-10, 10))
def test_power(a, k):
    x = ErrBounded.from_value(a)
    assert (x ** k).value == pytest.approx(a ** k, rel=1e-12)


@pytest.mark.parametrize("value,digits,text", [
    (1.53e-3, 3, "1.53e-3"),
    (9.999999, 3, "1.00e+1"),
    (62.0126, 4, "6.201e+1"),
    (1.0, 1, "1e+0"),
])
def test_format(value, digits, text):
    assert ErrBounded.from_value(value).format(digits) == text


def test_agreement():
    a = ErrBounded(0.0, 1e-9)
    assert a.agrees_with(ErrBounded(1.5e-9, 1e-9))
    assert not a.agrees_with(ErrBounded(3e-9, 1e-9))
    assert ErrBounded.product([]).value == 1.0
