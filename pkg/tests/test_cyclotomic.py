from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmodular.cyclotomic import (
    CycNumber,
    OrderMismatch,
    ScalarSyntaxError,
    cyc_reduce,
    cyclotomic_polynomial,
    euler_phi,
    format_scalar,
    parse_scalar,
)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (Fraction(-1), Fraction(1))
    assert cyclotomic_polynomial(3) == (Fraction(1), Fraction(1), Fraction(1))
    assert cyclotomic_polynomial(4) == (Fraction(1), Fraction(0), Fraction(1))
    assert cyclotomic_polynomial(12) == (
        Fraction(1), Fraction(0), Fraction(-1), Fraction(0), Fraction(1),
    )
    assert euler_phi(12) == 4


def test_reduce_examples():
    # zeta^2 with N=4 reduces to -1
    assert cyc_reduce(4, [0, 0, 1]) == CycNumber.from_rational(4, -1)
    # zeta_3^3 = 1
    assert cyc_reduce(3, [0, 0, 0, 1]) == CycNumber.one(3)
    # 1 + zeta + zeta^2 = 0 for N=3
    assert cyc_reduce(3, [1, 1, 1]).is_zero()


def test_reduce_idempotent():
    a = cyc_reduce(12, [1, 2, 3, 4, 5, 6])
    assert cyc_reduce(12, list(a.coeffs)) == a


def test_mul_examples():
    i = CycNumber.zeta(4)
    assert i * i == -1 + CycNumber.zero(4)
    z = CycNumber.zeta(3)
    a = 1 + 2 * z
    b = 1 + 2 * z * z
    assert a * b == CycNumber.from_rational(3, 3)
    assert a * CycNumber.one(3) == a


def test_inverse():
    assert CycNumber.one(5).inverse() == CycNumber.one(5)
    z = CycNumber.zeta(7)
    assert z.inverse() == z**6
    a = 1 + 2 * CycNumber.zeta(3)
    ainv = a.inverse()
    assert a * ainv == CycNumber.one(3)
    assert ainv == (1 + 2 * CycNumber.zeta(3, 2)) / 3
    with pytest.raises(ZeroDivisionError):
        CycNumber.zero(3).inverse()


def test_conj():
    z8 = CycNumber.zeta(8)
    assert z8.conj() == z8**7
    assert CycNumber.one(8).conj() == CycNumber.one(8)
    z3 = CycNumber.zeta(3)
    assert (1 + z3).conj() == 1 + z3**2
    a = cyc_reduce(12, [1, 2, 3, 4])
    assert a.conj().conj() == a


def test_gauss_sum_square():
    # (1 + 2*zeta_3)^2 = -3 exactly, computed inside Q(zeta_12)
    z3 = CycNumber.zeta(12, 4)
    a = 1 + 2 * z3
    assert a * a == CycNumber.from_rational(12, -3)


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        CycNumber.one(3) + CycNumber.one(4)


def test_parse_and_format():
    assert parse_scalar("1", 12).is_one()
    assert parse_scalar("-1", 12) == CycNumber.from_rational(12, -1)
    assert parse_scalar("z^4", 12) == CycNumber.zeta(12, 4)
    assert parse_scalar("1 + 2*z^4", 12) == 1 + 2 * CycNumber.zeta(12, 4)
    assert parse_scalar("1+2*z^4", 12) == 1 + 2 * CycNumber.zeta(12, 4)
    assert parse_scalar("z", 12) == CycNumber.zeta(12, 1)
    third = parse_scalar("1 (den 3)", 12)
    assert third.rational_value() == Fraction(1, 3)
    assert parse_scalar("0", 12).is_zero()
    with pytest.raises(ScalarSyntaxError):
        parse_scalar("z^12", 12)
    with pytest.raises(ScalarSyntaxError):
        parse_scalar("", 12)
    with pytest.raises(ScalarSyntaxError):
        parse_scalar("1 + + 2", 12)


@given(
    st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=4),
    st.sampled_from([1, 3, 4, 8, 12]),
)
def test_format_round_trip(raw, order):
    a = cyc_reduce(order, raw)
    assert parse_scalar(format_scalar(a), order) == a


_scalars = st.builds(
    lambda raw, den: cyc_reduce(12, [Fraction(c, den) for c in raw]),
    st.lists(st.integers(min_value=-20, max_value=20), min_size=4, max_size=4),
    st.integers(min_value=1, max_value=6),
)


@settings(max_examples=200)
@given(_scalars, _scalars, _scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == CycNumber.one(12)
    assert (a * b).conj() == a.conj() * b.conj()
