"""Wire formats shared with the main package, reimplemented over sympy.

A rational is the string "p/q" ("/q" omitted for integers), a polynomial
is its ascending coefficient list, a rational function is
{"num": [...], "den": [...]}, matrices are row-major nested lists.
Fixture files follow the schema
{"id", "description", "inputs", "expected", "provenance"} and are
written canonically (sorted keys, indent 1, trailing newline) so
regeneration is byte-identical.
"""

import json
from fractions import Fraction

import sympy as sp

Z = sp.Symbol("z")


def rat_from_json(text):
    return sp.Rational(Fraction(text))


def rat_to_json(value):
    value = sp.nsimplify(value, rational=True)
    p, q = sp.fraction(sp.Rational(value))
    return str(p) if q == 1 else f"{p}/{q}"


def poly_from_json(coeffs, var=Z):
    return sum((rat_from_json(c) * var**i for i, c in enumerate(coeffs)), sp.Integer(0))


def rf_from_json(data, var=Z):
    num = poly_from_json(data["num"], var)
    den = poly_from_json(data["den"], var)
    return sp.cancel(num / den)


def rf_to_json(expr, var=Z):
    """Serialize a rational expression with the denominator made monic."""
    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    pn = sp.Poly(num, var)
    pd = sp.Poly(den, var)
    lead = pd.LC()
    pn = pn * (1 / lead)
    pd = pd * (1 / lead)
    return {
        "num": [rat_to_json(c) for c in reversed(pn.all_coeffs())],
        "den": [rat_to_json(c) for c in reversed(pd.all_coeffs())],
    }


def matrix_from_json(rows, var=Z):
    return sp.Matrix([[rf_from_json(e, var) for e in row] for row in rows])


def matrix_to_json(mat, var=Z):
    return [[rf_to_json(mat[i, j], var) for j in range(mat.cols)] for i in range(mat.rows)]


def load_instance(path):
    """Read an instance file: returns (d, K, L list, R list, curve dict).

    L and R are lists of sympy matrices in the variable x; the curve dict
    maps "x"/"y"/"s" to sympy expressions in z (absent entries omitted).
    """
    with open(path) as fh:
        data = json.load(fh)
    x = sp.Symbol("x")
    L = [matrix_from_json(m, x) for m in data["L"]]
    R = [matrix_from_json(m, x) for m in data.get("R") or []]
    curve = {}
    for key, val in (data.get("parametrization") or {}).items():
        if val is not None:
            curve[key] = rf_from_json(val, Z)
    return data["d"], data["K"], L, R, curve


def write_fixture(path, fixture):
    text = json.dumps(fixture, indent=1, sort_keys=True) + "\n"
    with open(path, "w") as fh:
        fh.write(text)


def provenance(script):
    return {"script": script, "cas": "sympy", "cas_version": sp.__version__}
