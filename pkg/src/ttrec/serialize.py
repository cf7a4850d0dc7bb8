"""JSON wire encoding of the exact-arithmetic value types.

Conventions: a rational is the string "p/q" (the "/q" is omitted when
q = 1); a polynomial is the list of its coefficients in ascending degree;
a rational function is {"num": [...], "den": [...]}; matrices are
row-major nested lists; an hbar-series is {"lowest": k, "coeffs": [...]}.
"""

from fractions import Fraction

from .algebra import HbarSeries, Matrix, Polynomial, RationalFunction, rat

__all__ = [
    "rat_to_json",
    "rat_from_json",
    "poly_to_json",
    "poly_from_json",
    "rf_to_json",
    "rf_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "hbar_to_json",
    "hbar_from_json",
]


def rat_to_json(value):
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rat_from_json(text):
    return Fraction(text)


def poly_to_json(p):
    return [rat_to_json(c) for c in p.coeffs]


def poly_from_json(data):
    return Polynomial([Fraction(c) for c in data])


def rf_to_json(f):
    if isinstance(f, (int, Fraction)):
        f = RationalFunction.const(f)
    elif isinstance(f, Polynomial):
        f = RationalFunction(f)
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def rf_from_json(data):
    return RationalFunction(poly_from_json(data["num"]), poly_from_json(data["den"]))


def matrix_to_json(m, entry=rf_to_json):
    return [[entry(e) for e in row] for row in m.rows]


def matrix_from_json(data, entry=rf_from_json):
    return Matrix([[entry(e) for e in row] for row in data])


def hbar_to_json(series, entry):
    return {
        "lowest": series.low,
        "coeffs": [entry(series.coefficient(k)) for k in range(series.low, series.K + 1)],
    }


def hbar_from_json(data, entry, K=None):
    low = int(data["lowest"])
    coeffs = [entry(c) for c in data["coeffs"]]
    if K is None:
        K = low + len(coeffs) - 1
    return HbarSeries.from_coeffs(coeffs, K, low=low)
