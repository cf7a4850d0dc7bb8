"""Exact path integrals of the wave-function exponent integrands.

The exponent series of the recovered first fundamental-solution column
has order-k integrand g_k(z) x'(z) dz where g is the ratio of hbar
series ((M L)_{11}) / M_{11}.  Both series come from the eigenbasis
recursion in this package; the integrals along a segment of the real
z-line are evaluated in closed form by sympy and exported as
high-precision decimals.
"""

import sympy as sp

from .io import Z
from .eigen_m import m_series


def exponent_integrals(L, curve, z_from, z_to, K, digits=60):
    """Return ([S_0, ..., S_K] as Decimal strings, closed forms as strs)."""
    Ms = m_series(L, curve, K)
    x = sp.Symbol("x")
    L_on = [Lk.subs(x, curve["x"]).applyfunc(sp.cancel) for Lk in L]
    # numerator and denominator hbar-series of g
    num = []
    for k in range(K + 1):
        acc = sp.Integer(0)
        for l in range(0, min(k, len(L_on) - 1) + 1):
            acc += (Ms[k - l] * L_on[l])[0, 0]
        num.append(sp.cancel(acc))
    den = [sp.cancel(Ms[k][0, 0]) for k in range(K + 1)]
    g = []
    for k in range(K + 1):
        acc = num[k]
        for j in range(k):
            acc -= g[j] * den[k - j]
        g.append(sp.cancel(acc / den[0]))
    xp = sp.diff(curve["x"], Z)
    values, forms = [], []
    for k in range(K + 1):
        s = sp.integrate(sp.cancel(g[k] * xp), (Z, sp.Rational(z_from), sp.Rational(z_to)))
        s = sp.simplify(s)
        forms.append(str(s))
        values.append(str(sp.N(s, digits)))
    return values, forms
