"""Determinant-side expansions for the loop-equation cross-check.

For a point (x0, y0) off the curve and a list of parameter points
p_1..p_n pinned on the curve, expand

    det( y0*Id - L(x0) - sum over injection chains of
         hbar^len * M(p_c1) ... M(p_ck) / chain denominator * eps-monomial )

collect the coefficient of eps_1 * ... * eps_n, and record its hbar
expansion.  The projector series M comes from the eigenbasis recursion
in this package, so the values are independent of the main engine.
"""

import itertools

import sympy as sp

from .io import Z
from .eigen_m import m_series

HB = sp.Symbol("hbar")


def det_expansion(L, curve, x0, y0, pins, K):
    """Return the list of hbar^0..hbar^K coefficients of the eps-monomial
    coefficient of the determinant above (exact rationals)."""
    Ms = m_series(L, curve, K)
    x = sp.Symbol("x")
    n = len(pins)
    eps = sp.symbols(f"e1:{n + 1}") if n else ()
    x_of = lambda zv: curve["x"].subs(Z, zv)
    m_at = lambda zv: sum(
        (HB**k * Ms[k].subs(Z, zv) for k in range(K + 1)), sp.zeros(2, 2)
    )

    total = sp.zeros(2, 2)
    for k, Lk in enumerate(L):
        total += HB**k * Lk.subs(x, sp.Rational(x0))
    A = sp.Rational(y0) * sp.eye(2) - total
    for k in range(1, n + 1):
        for chain in itertools.permutations(range(n), k):
            den = sp.Rational(x0) - x_of(pins[chain[0]])
            for a in range(k - 1):
                den *= x_of(pins[chain[a]]) - x_of(pins[chain[a + 1]])
            den *= x_of(pins[chain[-1]]) - sp.Rational(x0)
            prod = m_at(pins[chain[0]])
            for a in chain[1:]:
                prod = prod * m_at(pins[a])
            mono = sp.prod([eps[i] for i in chain])
            A = A - HB**k * mono / den * prod
    det = sp.expand(A.det())
    coeff = det
    for e in eps:
        coeff = coeff.coeff(e, 1)
    poly = sp.Poly(sp.expand(coeff), HB)
    return [sp.nsimplify(poly.coeff_monomial(HB**k)) for k in range(K + 1)]
