"""Leading residue sum of the time derivative of log tau.

The hbar^-1 coefficient only involves the curve itself: it is the sum
over all poles of x and s (infinity included) of Res s(z) y(z) x'(z) dz,
evaluated here with sympy residues on the instance-file parametrization.
"""

import sympy as sp

from .io import Z


def _pole_locations(expr):
    _num, den = sp.fraction(sp.together(expr))
    locs = set(sp.roots(sp.Poly(den, Z)))
    num_deg = sp.degree(_num, Z) if _num != 0 else -sp.oo
    if num_deg - sp.degree(den, Z) >= 1:
        locs.add(sp.oo)
    return locs


def leading_tau_coefficient(curve):
    f = sp.cancel(curve["s"] * curve["y"] * sp.diff(curve["x"], Z))
    locs = _pole_locations(curve["x"]) | _pole_locations(curve["s"])
    total = sp.Integer(0)
    w = sp.Symbol("w")
    for p in locs:
        if p is sp.oo:
            total += -sp.residue(sp.cancel(f.subs(Z, 1 / w) / w**2), w, 0)
        else:
            total += sp.residue(f, Z, p)
    return sp.nsimplify(total)
