"""Recursion invariants by direct symbolic residue evaluation.

Brute-force implementation of the spectral-curve recursion for a
degree-2 rational curve with a single finite simple branchpoint, working
with plain sympy rational functions: invariants are represented as
functions w(z_1, ..., z_n) with the differential omega = w dz_1...dz_n.
Substituting the deck transformation sigma(z) into a slot contributes a
pullback factor sigma'(z).

Conventions match the main engine's reported normalization: the kernel
is built from the branch difference of -y (so w_{0,3}(z1,z2,z3) =
1/(2 z1^2 z2^2 z3^2) on the square-root curve), and one-point
invariants are negated on output so the leading one-point function
aligns with +y dx.
"""

import itertools

import sympy as sp

from .io import Z
from .eigen_m import deck_involution


class EORecursion:
    def __init__(self, curve):
        self.x = curve["x"]
        self.y = curve["y"]
        self.sigma = deck_involution(self.x)
        self.sigma_p = sp.cancel(sp.diff(self.sigma, Z))
        self.xp = sp.diff(self.x, Z)
        num, _den = sp.fraction(sp.together(self.xp))
        bps = [r for r in sp.roots(sp.Poly(num, Z)) if sp.cancel(self.sigma.subs(Z, r) - r) == 0]
        if len(bps) != 1:
            raise ValueError("expected exactly one finite simple branchpoint")
        self.bp = bps[0]
        # kernel built on the opposite orientation (-y)
        dy = sp.cancel(-(self.y - self.y.subs(Z, self.sigma)))
        z0 = sp.Symbol("z0")
        half_b = 1 / (z0 - Z) - 1 / (z0 - self.sigma)
        self.kernel = sp.cancel(half_b / (2 * dy * self.xp))
        self.z0 = z0
        self._cache = {}

    def _slots(self, n):
        return sp.symbols(f"w1:{n + 1}")

    def w(self, g, n):
        """The function w_{g,n}(z0, w1, ..., w_{n-1}) (internal sign)."""
        key = (g, n)
        if key in self._cache:
            return self._cache[key]
        if (g, n) == (0, 1):
            raise ValueError("w_{0,1} is not produced by the recursion")
        if (g, n) == (0, 2):
            a, b = sp.symbols("a b")
            val = 1 / (a - b) ** 2
            self._cache[key] = (val, (a, b))
            return self._cache[key]
        rest = self._slots(n - 1)
        zz = sp.Symbol("zz")
        sz = self.sigma.subs(Z, zz)

        def ev(gg, nn, args):
            f, slots = self.w(gg, nn)
            return f.subs(list(zip(slots, args)), simultaneous=True)

        # pullback factor: exactly one sigma-substituted slot per term
        expr = sp.Integer(0)
        if g >= 1:
            expr += ev(g - 1, n + 1, (zz, sz) + tuple(rest))
        for g1 in range(0, g + 1):
            for r in range(0, n):
                for subset in itertools.combinations(range(n - 1), r):
                    g2 = g - g1
                    n1, n2 = r + 1, n - r
                    if (g1, n1) == (0, 1) or (g2, n2) == (0, 1):
                        continue
                    left = ev(g1, n1, (zz,) + tuple(rest[i] for i in subset))
                    comp = tuple(rest[i] for i in range(n - 1) if i not in subset)
                    right = ev(g2, n2, (sz,) + comp)
                    expr += left * right
        expr *= self.sigma_p.subs(Z, zz)
        integrand = self.kernel.subs([(self.z0, Z), (Z, zz)], simultaneous=True) * expr
        val = sp.residue(sp.cancel(sp.together(integrand)), zz, self.bp)
        val = sp.cancel(sp.together(val))
        slots = (Z,) + tuple(rest)
        self._cache[key] = (val, slots)
        return self._cache[key]

    def omega(self, g, n):
        """Public invariant: symmetrized in its slots, one-point negated."""
        val, slots = self.w(g, n)
        if n == 1:
            return sp.cancel(-val), slots
        return val, slots
