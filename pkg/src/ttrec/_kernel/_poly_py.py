"""Pure Python polynomial kernel.

Dense univariate polynomials are plain lists of coefficients, ascending
degree, with no trailing zeros.  Coefficients are arbitrary exact field
elements (Fraction, or rational functions for towers); zero-ness is tested
with bool().  The compiled Cython twin `_poly_core` implements the same
four hot operations.
"""

BACKEND = "python"


def poly_trim(c):
    while c and not c[-1]:
        c.pop()
    return c


def poly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i in range(len(b)):
        out[i] = out[i] + b[i]
    return poly_trim(out)


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return poly_trim(out)


def poly_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(rem) <= db:
        return [], poly_trim(rem)
    quo = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if not c:
            continue
        q = c / lead
        quo[i - db] = q
        for j in range(db + 1):
            rem[i - db + j] = rem[i - db + j] - q * b[j]
    return poly_trim(quo), poly_trim(rem)


def poly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc
