from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from ttrec.algebra import HbarSeries, Matrix, Polynomial, RationalFunction
from ttrec.serialize import (
    hbar_from_json,
    hbar_to_json,
    matrix_from_json,
    matrix_to_json,
    poly_from_json,
    poly_to_json,
    rat_from_json,
    rat_to_json,
    rf_from_json,
    rf_to_json,
)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=40)


@given(rationals)
@settings(max_examples=60, deadline=None)
def test_rational_roundtrip(q):
    assert rat_from_json(rat_to_json(q)) == q


def test_integer_form_is_compact():
    assert rat_to_json(Fraction(4, 2)) == "2"
    assert rat_to_json(Fraction(-3, 7)) == "-3/7"


@given(st.lists(rationals, min_size=0, max_size=6))
@settings(max_examples=40, deadline=None)
def test_polynomial_roundtrip(coeffs):
    p = Polynomial(coeffs)
    assert poly_from_json(poly_to_json(p)) == p


@given(st.lists(rationals, min_size=1, max_size=4), st.lists(rationals, min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_rf_roundtrip(num, den):
    if not any(den):
        den = [Fraction(1)]
    f = RationalFunction(Polynomial(num), Polynomial(den))
    g = rf_from_json(rf_to_json(f))
    assert not (f - g)


def test_matrix_roundtrip():
    m = Matrix([[RationalFunction.const(Fraction(1, 2)), RationalFunction.const(Fraction(3))],
                [RationalFunction.const(Fraction(0)), RationalFunction.const(Fraction(-7, 5))]])
    data = matrix_to_json(m)
    back = matrix_from_json(data)
    for i in range(2):
        for j in range(2):
            assert not (m[i, j] - back[i, j])


def test_hbar_roundtrip():
    s = HbarSeries.from_coeffs([Fraction(1), Fraction(0), Fraction(-2, 3)], 3, low=-1)
    data = hbar_to_json(s, rat_to_json)
    back = hbar_from_json(data, rat_from_json)
    for k in range(-1, 2):
        assert back.coefficient(k) == s.coefficient(k)
    assert data["lowest"] == -1
