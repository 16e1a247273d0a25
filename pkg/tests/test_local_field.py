from fractions import Fraction

import pytest

from e0struct.local_field import (KElement, LocalField, NotInvertible,
                                  PrecisionExhausted)


@pytest.fixture
def K22():
    return LocalField.eisenstein(2, (-2, 0, 1), 12)


def test_unramified_basic(Q3):
    # [TRIVIAL] e = 1, f = n, uniformizer p
    assert Q3.e == 1 and Q3.f == 1
    assert Q3.uniformizer.valuation() == 1
    x = Q3.element([7])
    assert x.valuation() == 0
    assert (x * x.invert()).reduce().as_int() == 1


def test_eisenstein_basic(K22):
    # [TRIVIAL] pi^2 = 2 in Q_2(sqrt 2): v(pi) = 1, v(2) = 2
    pi = K22.uniformizer
    assert pi.valuation() == 1
    two = K22.element([2])
    assert two.valuation() == 2
    assert (pi * pi - two).is_zero_at_precision()


def test_non_eisenstein_rejected():
    with pytest.raises(ValueError):
        LocalField.eisenstein(2, (-3, 0, 1), 8)  # constant not ~ p
    with pytest.raises(ValueError):
        LocalField.eisenstein(2, (-2, 1, 1), 8)  # middle coeff a unit


def test_embed_rational_valuations(Q5):
    # [DERIVED] v(50) = 2, v(1/5) = -1, v(3/4) = 0 in Q_5
    assert Q5.embed_rational(50).valuation() == 2
    assert Q5.embed_rational(Fraction(1, 5)).valuation() == -1
    assert Q5.embed_rational(Fraction(3, 4)).valuation() == 0


def test_embed_rational_is_multiplicative(Q3):
    qs = [Fraction(2, 5), Fraction(-7, 4), Fraction(9, 2), Fraction(1, 3)]
    for a in qs:
        for b in qs:
            lhs = Q3.embed_rational(a) * Q3.embed_rational(b)
            rhs = Q3.embed_rational(a * b)
            assert (lhs - rhs).is_zero_at_precision()


def test_embed_rational_hits_integer(Q7):
    # [DERIVED] 1/8 = 0.125: 8 * embed(1/8) == 1
    x = Q7.embed_rational(Fraction(1, 8))
    assert ((8 * x) - Q7.one().as_k()).is_zero_at_precision()


def test_precision_tracking(Q2):
    # [TRIVIAL] products lose no precision for integral elements; a
    # difference of equal elements is zero at precision, not zero
    x = Q2.element([6])
    y = Q2.element([6])
    d = x - y
    assert d.is_zero_at_precision()
    assert d.valuation_or_none() is None


def test_division_and_shift(Q2):
    x = Q2.element([12])  # 12 = 4 * 3
    assert x.valuation() == 2
    assert x.shift_down(2).valuation() == 0
    assert x.shift_down(2).reduce().as_int() == 1  # 3 mod 2


def test_not_invertible(Q2):
    with pytest.raises(NotInvertible):
        Q2.element([2]).invert()


def test_kelement_pow(Q3):
    x = Q3.element([2]).as_k() / Q3.element([3]).as_k()
    cube = x ** 3
    manual = x * x * x
    assert (cube - manual).is_zero_at_precision()
    assert ((x ** -2) * (x ** 2) - Q3.one().as_k()).is_zero_at_precision()


def test_eisenstein_coeff_moduli(K22):
    # [DERIVED] mod m^3 in Q_2(sqrt2): c0 mod 4, c1 mod 2
    assert K22.coeff_modulus(0, 3) == 4
    assert K22.coeff_modulus(1, 3) == 2


def test_element_to_json_roundtrip(Q3):
    x = Q3.element([5], 8).as_k()
    j = x.to_json()
    assert j["coeffs"] == [5] and j["shift"] == 0 and j["prec"] == 8


def test_zero_division_guard(Q2):
    z = Q2.zero(4).as_k()
    with pytest.raises((PrecisionExhausted, NotInvertible, ZeroDivisionError)):
        Q2.one().as_k() / z
