from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncspheres.errors import (MalformedNumber, NegativeInput,
                              NotAPerfectSquare, ZeroDenominator)
from ncspheres.scalars import (EXACT, GaussRational, float_backend,
                               format_rational, is_perfect_square,
                               parse_rational, sqrt_exact)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=40)
gauss = st.builds(GaussRational, rationals, rationals)


def test_parse_rational_forms():
    assert parse_rational("3/5") == Fraction(3, 5)
    assert parse_rational(" -7 ") == Fraction(-7)
    assert parse_rational("-24/25") == Fraction(-24, 25)


def test_parse_rational_rejects_garbage():
    for bad in ("", "x", "1.5", "3//5", "1/2/3"):
        with pytest.raises(MalformedNumber):
            parse_rational(bad)
    with pytest.raises(ZeroDenominator):
        parse_rational("1/0")


@given(rationals)
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_sqrt_exact_values():
    assert sqrt_exact(Fraction(16, 25)) == Fraction(4, 5)
    assert sqrt_exact(Fraction(0)) == 0
    with pytest.raises(NotAPerfectSquare):
        sqrt_exact(Fraction(2))
    with pytest.raises(NegativeInput):
        sqrt_exact(Fraction(-4))


@given(rationals)
def test_sqrt_exact_inverts_squaring(q):
    assert sqrt_exact(q * q) == abs(q)
    assert is_perfect_square(q * q)


@given(st.integers(min_value=1, max_value=10**6))
def test_between_squares_is_not_square(n):
    assert not is_perfect_square(Fraction(n * n + 1, 1))


def test_gauss_rational_parse_and_str():
    z = GaussRational(Fraction(-7, 25), Fraction(24, 25))
    assert GaussRational.parse(str(z)) == z
    with pytest.raises(MalformedNumber):
        GaussRational.parse("(1,2")


@given(gauss, gauss, gauss)
def test_gauss_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a * b == b * a
    assert a + (-a) == GaussRational(0, 0)


@given(gauss)
def test_gauss_inverse(a):
    if a.is_zero():
        return
    assert a * a.inverse() == GaussRational(1, 0)


@given(gauss, gauss)
def test_conjugation_is_multiplicative(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * a.conjugate()).im == 0


def test_exact_backend_zero_test_is_exact():
    tiny = GaussRational(Fraction(1, 10**40), 0)
    assert not EXACT.is_zero(tiny)
    assert EXACT.is_zero(tiny - tiny)
    assert EXACT.residual(tiny - tiny) == 0.0


def test_float_backend_tolerance():
    be = float_backend(1e-9)
    assert be.is_zero(1e-12 + 0j)
    assert not be.is_zero(1e-6 + 0j)
    assert be.convert(GaussRational(Fraction(1, 2), Fraction(-1, 4))) == 0.5 - 0.25j


def test_exact_backend_rejects_floats():
    with pytest.raises(TypeError):
        EXACT.convert(0.5)


@given(rationals, rationals)
def test_backend_conversion_agrees(re, im):
    z = GaussRational(re, im)
    fz = float_backend(1e-9).convert(z)
    assert abs(fz - complex(float(re), float(im))) < 1e-12
