# cython: language_level=3
"""Compiled polynomial kernel: same contract as _poly_py.

Coefficients stay generic Python objects (exact Fractions or rational
functions); the win comes from typed index loops and removed interpreter
overhead in the convolution and division inner loops.
"""

BACKEND = "cython"


def poly_trim(list c):
    while c and not c[-1]:
        c.pop()
    return c


def poly_add(a, b):
    cdef Py_ssize_t i, n
    if len(a) < len(b):
        a, b = b, a
    cdef list out = list(a)
    n = len(b)
    for i in range(n):
        out[i] = out[i] + b[i]
    return poly_trim(out)


def poly_mul(a, b):
    cdef Py_ssize_t i, j, na, nb
    if not a or not b:
        return []
    na = len(a)
    nb = len(b)
    cdef list out = [0] * (na + nb - 1)
    for i in range(na):
        ai = a[i]
        if not ai:
            continue
        for j in range(nb):
            out[i + j] = out[i + j] + ai * b[j]
    return poly_trim(out)


def poly_divmod(a, b):
    cdef Py_ssize_t i, j, db
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    cdef list rem = list(a)
    db = len(b) - 1
    lead = b[db]
    if len(rem) <= db:
        return [], poly_trim(rem)
    cdef list quo = [0] * (len(rem) - db)
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
