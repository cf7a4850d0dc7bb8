"""Spectral-curve geometry on the rational z-sphere.

A curve is a genus-0 parametrized triple (x(z), y(z)[, s(z)]) of rational
functions with d = deg x sheets.  This module extracts the pole data of x
(with an optional first-class pole-at-infinity block, basis z^(l-1)), the
constant pairing matrix C, the generalized fiber ("Vandermonde") vectors
with their formal square-root tag, branchpoints, double points, local deck
involutions, the Bergman kernel / prime form, and the implicit plane
equation E(x,y) = 0 with the holomorphy data of dx/E_y.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd as _int_gcd

from .algebra import (
    INF,
    AlgebraError,
    LaurentSeries,
    Matrix,
    NonRationalRootError,
    PoleEvaluationError,
    Polynomial,
    RationalFunction,
    laurent_at,
    rat,
    rational_roots,
    resultant,
)

__all__ = [
    "CurveError",
    "SqrtLeakError",
    "MobiusMap",
    "PoleData",
    "BranchPoint",
    "DoublePoint",
    "InvolutionSeries",
    "SpectralCurve",
    "TaggedValue",
    "VandermondeVector",
    "normalize_chart",
    "partial_fractions",
    "build_C",
    "vandermonde_vector",
    "fiber_vandermonde",
    "bilinear",
    "branchpoints",
    "double_points",
    "bergman",
    "prime_form_sq",
    "involution_series",
    "global_involution",
    "implicit_equation",
    "dx_over_Ey",
]


class CurveError(Exception):
    pass


class SqrtLeakError(CurveError):
    """A formal square root of x' survived to an odd power."""


def _rf(value):
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction(value)
    return RationalFunction.const(rat(value))


_Z = Polynomial.variable()


class MobiusMap:
    """z = (a u + b) / (c u + d) with rational coefficients, ad - bc != 0."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = (rat(v) for v in (a, b, c, d))
        if a * d - b * c == 0:
            raise CurveError("degenerate Mobius map")
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def is_identity(self):
        return self.b == 0 and self.c == 0 and self.a == self.d

    def as_rf(self):
        return RationalFunction(
            Polynomial([self.b, self.a]), Polynomial([self.d, self.c])
        )

    def __call__(self, u):
        if u is INF:
            if self.c == 0:
                return INF
            return self.a / self.c
        u = rat(u) if not isinstance(u, (RationalFunction, Polynomial)) else u
        den = self.c * u + self.d
        if isinstance(u, Fraction) and den == 0:
            return INF
        return (self.a * u + self.b) / den

    def inverse(self):
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def derivative_rf(self):
        return self.as_rf().derivative()

    def __repr__(self):
        return f"Mobius(({self.a})u+({self.b}))/(({self.c})u+({self.d}))"


@dataclass(frozen=True)
class PoleData:
    """Partial-fraction data of x.

    x(z) = X_inf0 + sum_k sum_l X[k][l-1] / (z - alpha_k)^l
                  + sum_l u_inf[l-1] * z^l        (pole-at-infinity block)

    The basis index runs over finite poles sorted ascending, each with
    l = 1..d_k, followed by the infinity block l = 1..d_inf.
    """

    X_inf0: Fraction
    poles: tuple  # of (alpha: Fraction, d_k: int, coeffs: tuple of Fraction)
    u_inf: tuple = ()  # coefficients of z^1..z^d_inf

    @property
    def d(self):
        return sum(p[1] for p in self.poles) + len(self.u_inf)

    def index(self):
        """Ordered basis labels [(alpha_or_INF, l)]."""
        out = []
        for alpha, dk, _ in self.poles:
            out.extend((alpha, l) for l in range(1, dk + 1))
        out.extend((INF, l) for l in range(1, len(self.u_inf) + 1))
        return out

    def basis_rf(self):
        """The basis functions phi_{k,l}(z) as rational functions."""
        out = []
        for alpha, dk, _ in self.poles:
            lin = Polynomial([-alpha, Fraction(1)])
            for l in range(1, dk + 1):
                out.append(RationalFunction(Polynomial([Fraction(1)]), lin**l))
        for l in range(1, len(self.u_inf) + 1):
            out.append(RationalFunction(_Z ** (l - 1)))
        return out

    def basis_at(self, z0):
        """Values phi_{k,l}(z0); z0 must avoid the finite poles."""
        z0 = rat(z0)
        out = []
        for alpha, dk, _ in self.poles:
            if z0 == alpha:
                raise CurveError(f"evaluation at pole {alpha}")
            base = Fraction(1) / (z0 - alpha)
            acc = Fraction(1)
            for _ in range(dk):
                acc = acc * base
                out.append(acc)
        acc = Fraction(1)
        for _ in range(len(self.u_inf)):
            out.append(acc)
            acc = acc * z0
        return out

    def reconstruct(self):
        x = RationalFunction.const(self.X_inf0)
        for alpha, dk, coeffs in self.poles:
            lin = Polynomial([-alpha, Fraction(1)])
            for l in range(1, dk + 1):
                x = x + RationalFunction(Polynomial.const(coeffs[l - 1]), lin**l)
        for l, u in enumerate(self.u_inf, start=1):
            x = x + RationalFunction(_Z**l * u)
        return x


def partial_fractions(x, allow_infinity=False):
    """Exact partial-fraction decomposition of a rational x.

    With allow_infinity=False (the default), a pole at infinity is an
    error: run normalize_chart first.  With allow_infinity=True the
    polynomial part becomes the infinity block of the PoleData.
    """
    x = _rf(x)
    quo, rem = divmod(x.num, x.den)
    u_inf = ()
    if quo.degree >= 1:
        if not allow_infinity:
            raise CurveError("x has a pole at infinity; normalize the chart first")
        u_inf = tuple(quo.coeffs[1:])
    X_inf0 = quo.coeffs[0] if quo.coeffs else Fraction(0)
    poles = []
    if x.den.degree >= 1:
        roots, residual = rational_roots(x.den)
        if residual.degree >= 1:
            raise NonRationalRootError(
                f"irrational pole locations (residual factor {residual!r})"
            )
        finite_part = RationalFunction(rem, x.den)
        # descending pole order fixes the basis layout (and matches the
        # reference layout of the shipped instances)
        for alpha, dk in sorted(roots, key=lambda r: r[0], reverse=True):
            series = laurent_at(finite_part, alpha, -1)
            coeffs = tuple(series.coefficient(-l) for l in range(1, dk + 1))
            if not coeffs[-1]:
                raise CurveError("pole order collapsed; inconsistent data")
            poles.append((alpha, dk, coeffs))
    pd = PoleData(X_inf0, tuple(poles), u_inf)
    if pd.reconstruct() != x:
        raise CurveError("partial-fraction reconstruction mismatch")
    return pd


def build_C(pd):
    """The constant symmetric pairing matrix of the fiber basis.

    Determined by the bilinear identity
      (x(z) - x(w)) / (z - w) = sum C_{kl,k'l'} phi_{kl}(z) phi_{k'l'}(w):
    finite-pole blocks C_{k,l;k,l'} = -X_{k,l+l'-1}, infinity block
    C_{l,l'} = +u_{l+l'-1}, cross blocks zero.
    """
    idx = pd.index()
    d = len(idx)
    rows = [[Fraction(0)] * d for _ in range(d)]
    coeff_of = {}
    for alpha, dk, coeffs in pd.poles:
        coeff_of[alpha] = coeffs
    for i, (ai, li) in enumerate(idx):
        for j, (aj, lj) in enumerate(idx):
            if ai != aj:
                continue
            m = li + lj - 1
            if ai is INF:
                if m <= len(pd.u_inf):
                    rows[i][j] = pd.u_inf[m - 1]
            else:
                ck = coeff_of[ai]
                if m <= len(ck):
                    rows[i][j] = -ck[m - 1]
    C = Matrix(rows)
    # anti-diagonal entries within each block are the top pole coefficients,
    # so C is invertible for consistent data
    from .algebra import bareiss_det

    if not bareiss_det([row[:] for row in C.rows]):
        raise CurveError("singular pairing matrix: corrupted pole data")
    return C


class TaggedValue:
    """An exact value times formal half-powers of x' at tagged points.

    value = raw * prod_p x'(p)^(halves[p]/2).  Materializing with an odd
    half-power and nonzero raw part is a hard error (the square root must
    only ever appear squared).
    """

    __slots__ = ("raw", "halves")

    def __init__(self, raw, halves=None):
        self.raw = raw
        self.halves = dict(halves or {})

    def __mul__(self, other):
        if isinstance(other, TaggedValue):
            halves = dict(self.halves)
            for p, h in other.halves.items():
                halves[p] = halves.get(p, 0) + h
            return TaggedValue(self.raw * other.raw, halves)
        return TaggedValue(self.raw * other, self.halves)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, TaggedValue):
            if not other:
                return self
            other = TaggedValue(other)
        if self.raw == 0:
            return other
        if other.raw == 0:
            return self
        if self._norm() != other._norm():
            raise SqrtLeakError("adding values with different square-root tags")
        return TaggedValue(self.raw + other.raw, self._norm())

    __radd__ = __add__

    def _norm(self):
        return {p: h for p, h in self.halves.items() if h}

    def value(self, xprime_at):
        """Materialize; xprime_at maps a tagged point to x'(point)."""
        if self.raw == 0:
            return Fraction(0)
        out = self.raw
        for p, h in self._norm().items():
            if h % 2:
                raise SqrtLeakError(f"odd half-power of x' at {p}")
            out = out * xprime_at(p) ** (h // 2)
        return out


class VandermondeVector:
    """Fiber basis vector at a point: raw entries times x'(z0)^(-1/2)."""

    __slots__ = ("z0", "entries")

    def __init__(self, z0, entries):
        self.z0 = z0
        self.entries = list(entries)

    def __len__(self):
        return len(self.entries)

    def tagged(self, i):
        return TaggedValue(self.entries[i], {self.z0: -1})


def vandermonde_vector(pd, z0, xprime=None):
    """The generalized Vandermonde vector at z0.

    Entries are phi_{k,l}(z0) / sqrt(x'(z0)); the square root stays a
    formal tag on the returned vector.  z0 must be neither a pole of x nor
    a branchpoint (x'(z0) = 0).
    """
    z0 = rat(z0)
    if xprime is not None:
        xv = xprime(z0) if callable(xprime) else xprime
        if not xv:
            raise CurveError(f"x'({z0}) = 0: branchpoint")
    return VandermondeVector(z0, pd.basis_at(z0))


def bilinear(u, A, v):
    """u^T A v as a TaggedValue (A a constant Matrix or None for u.v)."""
    if A is None:
        raw = sum((a * b for a, b in zip(u.entries, v.entries)), Fraction(0))
    else:
        Av = A * v.entries
        raw = sum((a * b for a, b in zip(u.entries, Av)), Fraction(0))
    halves = {u.z0: -1}
    halves[v.z0] = halves.get(v.z0, 0) - 1
    return TaggedValue(raw, halves)


@dataclass(frozen=True)
class BranchPoint:
    location: object  # Fraction or INF
    kind: str  # "finite" (zero of dx, x finite) or "pole" (pole of x, order >= 2)
    order: int
    regular: bool

    def is_simple(self):
        return self.kind == "finite" and self.order == 2


@dataclass(frozen=True)
class DoublePoint:
    b: Fraction
    b_bar: Fraction


@dataclass(frozen=True)
class InvolutionSeries:
    """Local deck involution at a simple branchpoint a.

    sigma(z) = a + sum coeffs[j-1] * (z-a)^j to truncation order T, with
    coeffs[0] = -1.
    """

    branchpoint: BranchPoint
    coeffs: tuple  # of Fraction, exponents 1..T
    T: int

    def series(self):
        a = self.branchpoint.location
        return LaurentSeries(a, 1, list(self.coeffs), self.T)


def _inf_chart(f):
    """f(1/w) as a rational function of w."""
    w = RationalFunction.variable()
    return f(RationalFunction(Polynomial([Fraction(1)]), Polynomial([Fraction(0), Fraction(1)])))


def _valuation_at(f, p):
    """Order of vanishing (negative for poles) of rational f at finite p."""
    if not f.num:
        return None
    s = laurent_at(f, p, 0)
    if s.valuation() is not None:
        return s.valuation()
    order = 1
    while True:
        s = laurent_at(f, p, order)
        if s.valuation() is not None:
            return s.valuation()
        order *= 2


def _is_regular_bp(curve, location):
    """dy != 0 (and ds != 0 when s is present) at the branchpoint."""
    for g in filter(None, (curve.y, curve.s)):
        gw = _inf_chart(g) if location is INF else g
        p = Fraction(0) if location is INF else location
        if not _finite_at(gw, p):
            continue  # a pole has nonvanishing differential
        v = _valuation_at(gw - gw(p), p)
        if v is None or v != 1:
            return False
    return True


def _finite_at(f, p):
    try:
        f(p)
        return True
    except PoleEvaluationError:
        return False


def branchpoints(curve):
    """All branchpoints of the x-projection, including at infinity.

    Finite kind: zeros of dx where x is finite (order = 1 + multiplicity).
    Pole kind: poles of x of order >= 2.  Both kinds are also detected at
    z = infinity through the w = 1/z chart.
    """
    x = curve.x
    out = []
    xp = x.derivative()
    if xp.num:
        roots, residual = rational_roots(xp.num)
        if residual.degree >= 1:
            raise NonRationalRootError(
                "non-rational branchpoint, exact mode unavailable"
            )
        for a, mult in roots:
            if not _finite_at(x, a):
                continue  # pole of x; handled below
            out.append(
                BranchPoint(a, "finite", mult + 1, _is_regular_bp(curve, a))
            )
    finite_poles, _inf_order, residual = x.poles()
    if residual.degree >= 1:
        raise NonRationalRootError("non-rational pole of x")
    for alpha, order in finite_poles:
        if order >= 2:
            out.append(BranchPoint(alpha, "pole", order, _is_regular_bp(curve, alpha)))
    # behavior at infinity
    xw = _inf_chart(x)
    if not _finite_at(xw, Fraction(0)):
        order = -_valuation_at(xw, Fraction(0))
        if order >= 2:
            out.append(BranchPoint(INF, "pole", order, _is_regular_bp(curve, INF)))
    else:
        v = _valuation_at(xw - xw(Fraction(0)), Fraction(0))
        if v is not None and v >= 2:
            out.append(BranchPoint(INF, "finite", v, _is_regular_bp(curve, INF)))
    return out


def _bivariate_diff_quotient(f):
    """(f(z) - f(w)) / (z - w) as a polynomial in w over Q[z].

    Returns (P, denom) with f(z) - f(w) = (z - w) P(z,w) / (den(z) den(w)),
    P represented as Polynomial-in-w with Polynomial-in-z coefficients.
    """
    num, den = f.num, f.den
    # num(z) den(w) - num(w) den(z), as a polynomial in w over Q[z]
    nz = num  # element of Q[z]
    dz = den
    a = Polynomial([dz * c for c in num.coeffs])  # num(w) den(z)
    b = Polynomial([nz * c for c in den.coeffs])  # den(w) num(z)
    full = b - a
    # synthetic division by (w - z): root r = z
    r = _Z
    coeffs = full.coeffs
    if not coeffs:
        return Polynomial(), den
    out = [None] * (len(coeffs) - 1)
    carry = coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        out[k] = carry
        carry = coeffs[k] + r * carry
    if carry:
        raise CurveError("difference quotient not divisible by (z - w)")
    return Polynomial(out), den


def double_points(x, y):
    """Rational self-intersections of the map z -> (x(z), y(z)): pairs
    (b, b_bar) with b < b_bar.  Irrational ones are dropped here; use
    double_point_locus for the full picture."""
    return double_point_locus(x, y)[0]


def double_point_locus(x, y):
    """Self-intersections of the map z -> (x(z), y(z)).

    Returns (pairs, residual): the rational pairs (b, b_bar), b < b_bar,
    with x and y both equal at the two parameter values, found by
    resultants of the two difference quotients (the diagonal factor is
    removed before the resultant); and a squarefree monic polynomial over
    Q whose roots cover every double-point parameter that is not exactly
    representable (constant 1 when there are none).
    """
    x, y = _rf(x), _rf(y)
    P, xden = _bivariate_diff_quotient(x)
    Q, yden = _bivariate_diff_quotient(y)
    if not P or not Q:
        raise CurveError("degenerate map: a coordinate is constant")
    if P.degree == 0 or Q.degree == 0:
        # one quotient never vanishes off the diagonal in w for generic z;
        # resultant in w is a unit times a power, still fine below
        pass
    res = resultant(P, Q) if P.degree > 0 and Q.degree > 0 else (P if Q.degree == 0 else Q).coeffs[0]
    if isinstance(res, Polynomial):
        res_poly = res
    else:
        res_poly = Polynomial.const(res)
    if not res_poly:
        raise CurveError("resultant vanishes identically: non-birational data")
    found = set()
    out = []
    leftover = Polynomial([Fraction(1)])
    if res_poly.degree >= 1:
        roots, residual = rational_roots(res_poly)
        if residual.degree >= 1:
            # irrational double-point parameters: keep their minimal locus
            g = residual.gcd(residual.derivative())
            leftover = leftover * residual.exact_div(g).monic()
        for z0, _mult in roots:
            # candidate partners: common roots in w of P(z0, w), Q(z0, w)
            Pw = Polynomial([c(z0) for c in P.coeffs])
            Qw = Polynomial([c(z0) for c in Q.coeffs])
            g = Pw.gcd(Qw) if Pw and Qw else (Pw or Qw)
            if not g or g.degree < 1:
                continue
            wroots, wres = rational_roots(g)
            if wres.degree >= 1:
                # rational parameter with an irrational partner
                lin = Polynomial([-z0, Fraction(1)])
                if leftover % lin:
                    leftover = leftover * lin
                wsq = wres.exact_div(wres.gcd(wres.derivative())).monic()
                leftover = leftover * wsq.exact_div(wsq.gcd(leftover))
            for w0, _m in wroots:
                if w0 == z0:
                    continue
                try:
                    if x(z0) == x(w0) and y(z0) == y(w0):
                        key = (min(z0, w0), max(z0, w0))
                        if key not in found:
                            found.add(key)
                            out.append(DoublePoint(*key))
                except PoleEvaluationError:
                    continue
    out.sort(key=lambda dp: (dp.b, dp.b_bar))
    return out, leftover


def bergman(z1, z2):
    """B(z1,z2) = 1/(z1-z2)^2, the coefficient of dz1 dz2."""
    z1, z2 = rat(z1), rat(z2)
    if z1 == z2:
        raise CurveError("Bergman kernel at coinciding points")
    return 1 / (z1 - z2) ** 2


def prime_form_sq(z1, z2):
    """Squared prime form (z1-z2)^2 (the square root of dz dz' stays formal)."""
    z1, z2 = rat(z1), rat(z2)
    if z1 == z2:
        raise CurveError("prime form at coinciding points")
    return (z1 - z2) ** 2


def involution_series(curve, bp, T):
    """Local deck involution sigma at a simple regular branchpoint.

    Solves x(sigma(z)) = x(z) order by order; sigma(a) = a, sigma'(a) = -1.
    Only finite locations are handled here (recharting moves a branchpoint
    at infinity to a finite location first).
    """
    if not bp.is_simple():
        raise CurveError("involution series requires a simple finite branchpoint")
    if bp.location is INF:
        raise CurveError("rechart first: branchpoint at infinity")
    a = bp.location
    xs = laurent_at(curve.x, a, T + 2)
    xs = xs - xs.coefficient(0)
    x2 = xs.coefficient(2)
    if not x2 or xs.coefficient(1):
        raise CurveError("not a simple branchpoint of x")
    # one extra working order so x(sigma) = x holds through zeta^(T+1),
    # which pins every sigma coefficient up to zeta^T
    Tw = T + 1
    coeffs = [Fraction(-1)] + [Fraction(0)] * (Tw - 1)
    s = LaurentSeries(a, 1, coeffs[:], Tw)
    while True:
        err = xs.compose(s) - xs
        v = err.valuation()
        if v is None or v > Tw:
            break
        j = v - 1
        if j < 2 or j > Tw:
            raise CurveError("involution iteration failed")
        # adding c*zeta^j to sigma changes x(sigma) by -2 x2 c zeta^(j+1) + ...
        c = err.coefficient(v) / (2 * x2)
        coeffs[j - 1] = coeffs[j - 1] + c
        s = LaurentSeries(a, 1, coeffs[:], Tw)
    return InvolutionSeries(bp, tuple(coeffs[:T]), T)


def global_involution(curve):
    """The global rational deck involution for a degree-2 x, else None.

    For d = 2 the quotient (x(z) - x(w))/(z - w) is A z w + B (z + w) + C,
    giving sigma(z) = -(B z + C)/(A z + B) as a Mobius map.
    """
    if curve.d != 2:
        return None
    P, _ = _bivariate_diff_quotient(curve.x)
    if P.degree > 1:
        return None
    P1 = P.coeffs[1] if P.degree >= 1 else Polynomial()
    P0 = P.coeffs[0] if P.coeffs else Polynomial()
    if P1.degree > 1 or P0.degree > 1:
        return None
    A = P1.coeffs[1] if P1.degree >= 1 else Fraction(0)
    B = P1.coeffs[0] if P1.coeffs else Fraction(0)
    B2 = P0.coeffs[1] if P0.degree >= 1 else Fraction(0)
    C = P0.coeffs[0] if P0.coeffs else Fraction(0)
    if B != B2:
        return None
    try:
        m = MobiusMap(-B, -C, A, B)
    except CurveError:
        return None
    sig = m.as_rf()
    if curve.x(sig) != curve.x:
        return None
    return m


def implicit_equation(x, y):
    """The primitive implicit plane equation E(X, Y) = 0 of the image curve.

    Returned as a Polynomial in Y whose coefficients are Polynomials in X,
    normalized primitive over Z with positive leading coefficient.
    """
    x, y = _rf(x), _rf(y)
    # coefficient ring Q(X)[Y]: Polynomial-in-Y over RationalFunction-in-X;
    # the resultant is taken in z, eliminating the parameter
    XV = RationalFunction.variable()

    def pcoef(n, d):  # n - X*d as an element of Q(X)[Y]
        return Polynomial.const(RationalFunction.const(n) - XV * d)

    def qcoef(n, d):  # Y*d - n as an element of Q(X)[Y]
        return Polynomial([RationalFunction.const(-n), RationalFunction.const(d)])

    def at(p, i):
        return p.coeffs[i] if i <= p.degree else Fraction(0)

    # P(z) = num_x(z) - X den_x(z), Q(z) = Y den_y(z) - num_y(z)
    P = Polynomial(
        [pcoef(at(x.num, i), at(x.den, i)) for i in range(max(x.num.degree, x.den.degree) + 1)]
    )
    Qp = Polynomial(
        [qcoef(at(y.num, i), at(y.den, i)) for i in range(max(y.num.degree, y.den.degree) + 1)]
    )
    R = resultant(P, Qp)
    return primitive_bivariate(R)


def primitive_bivariate(R):
    """Normalize an element of Q(X)[Y] to a primitive element of Z[X][Y].

    Clears the X-denominators, divides out the integer content, and fixes
    the sign so the leading Y-coefficient has positive leading term.
    """
    if not isinstance(R, Polynomial):
        R = Polynomial.const(R)
    R = Polynomial(
        [c if isinstance(c, RationalFunction) else RationalFunction.const(c) for c in R.coeffs]
    )
    # R in Q(X)[Y]; clear X denominators and normalize primitive
    den_lcm = Polynomial([Fraction(1)])
    for c in R.coeffs:
        den_lcm = den_lcm.exact_div(den_lcm.gcd(c.den)) * c.den
    coeffs_x = []
    for c in R.coeffs:
        cleared = c.num * den_lcm.exact_div(c.den)
        coeffs_x.append(cleared)
    # integer content and sign normalization
    def int_content(p):
        num_g, den_l = 0, 1
        for cc in p.coeffs:
            num_g = _int_gcd(num_g, cc.numerator)
            den_l = den_l * cc.denominator // _int_gcd(den_l, cc.denominator)
        return Fraction(num_g, den_l) if num_g else Fraction(0)

    content = Fraction(0)
    for p in coeffs_x:
        if p:
            c = int_content(p)
            content = c if not content else Fraction(
                _int_gcd(content.numerator * c.denominator, c.numerator * content.denominator),
                content.denominator * c.denominator,
            )
    if not content:
        raise CurveError("bivariate polynomial degenerated to zero")
    lead = coeffs_x[-1]
    sign = 1 if lead.lead > 0 else -1
    scale = Fraction(sign) / content
    return Polynomial([p * scale for p in coeffs_x])


def evaluate_bivariate(E, xval, yval):
    """E(xval, yval) for E in Q[X][Y]; values may be rational functions."""
    acc = None
    for j in range(E.degree, -1, -1):
        cj = E.coeffs[j] if j <= E.degree else Polynomial()
        cval = cj(xval) if cj else (xval * 0 if not isinstance(xval, Fraction) else Fraction(0))
        acc = cval if acc is None else acc * yval + cval
    return acc if acc is not None else Fraction(0)


def bivariate_dy(E):
    """dE/dY in Q[X][Y]."""
    return Polynomial([j * c for j, c in enumerate(E.coeffs)][1:])


def dx_over_Ey(curve, E=None):
    """x'(z) / E_y(x(z), y(z)) as a rational function of z.

    Holomorphic at regular branchpoints; at a double point it has simple
    poles with opposite residues at the two preimages.
    """
    if E is None:
        E = curve.implicit_E
    Ey = bivariate_dy(E)
    denom = evaluate_bivariate(Ey, curve.x, curve.y)
    if isinstance(denom, Polynomial):
        denom = RationalFunction(denom)
    if not denom:
        raise CurveError("E_y vanishes identically on the curve")
    return curve.xprime / denom


class SpectralCurve:
    """Frozen genus-0 parametrized curve with cached geometry."""

    def __init__(self, x, y, s=None, d=None):
        self.x = _rf(x)
        self.y = _rf(y)
        self.s = _rf(s) if s is not None else None
        deg = self.x.degree()
        if d is not None and d != deg:
            raise CurveError(f"declared d={d} but deg x = {deg}")
        self.d = deg
        if self.d < 1:
            raise CurveError("x must be non-constant")

    @cached_property
    def xprime(self):
        return self.x.derivative()

    @cached_property
    def yprime(self):
        return self.y.derivative()

    @cached_property
    def pole_data(self):
        return partial_fractions(self.x, allow_infinity=True)

    @cached_property
    def C(self):
        return build_C(self.pole_data)

    @cached_property
    def C_inv(self):
        return self.C.inverse()

    @cached_property
    def branchpoints(self):
        return branchpoints(self)

    @cached_property
    def finite_branchpoints(self):
        return [b for b in self.branchpoints if b.kind == "finite"]

    @cached_property
    def _dp_locus_xy(self):
        return double_point_locus(self.x, self.y)

    @cached_property
    def double_points_xy(self):
        return self._dp_locus_xy[0]

    @cached_property
    def double_point_residual_xy(self):
        """Squarefree polynomial covering irrational double-point
        parameters (constant 1 when there are none)."""
        return self._dp_locus_xy[1]

    @cached_property
    def double_points_xs(self):
        if self.s is None:
            return []
        return double_points(self.x, self.s)

    @cached_property
    def deck(self):
        return global_involution(self)

    @cached_property
    def implicit_E(self):
        return implicit_equation(self.x, self.y)

    def fiber(self, x0):
        """Sorted rational preimages of x0 (must be a regular value with a
        fully rational fiber; raises otherwise)."""
        x0 = rat(x0)
        p = self.x.num - x0 * self.x.den
        if not p or p.degree < 1:
            raise CurveError("fiber of a critical or trivial value")
        roots, residual = rational_roots(p)
        if residual.degree >= 1:
            raise NonRationalRootError(f"fiber over {x0} is not fully rational")
        fiber = []
        for z0, mult in roots:
            if mult > 1:
                raise CurveError(f"{x0} is a branch value")
            fiber.append(z0)
        if len(fiber) != self.d:
            raise CurveError(f"fiber over {x0} has {len(fiber)} points, expected {self.d}")
        return sorted(fiber)

    def sheet_of(self, z0):
        """1-based index of z0 in the sorted fiber through z0."""
        z0 = rat(z0)
        fiber = self.fiber(self.x(z0))
        return fiber.index(z0) + 1

    def is_special_z(self, z0):
        """True when z0 is a pole of x, a branchpoint, or a double point."""
        z0 = rat(z0)
        if not self.x.den(z0):
            return True
        if not _finite_at(self.xprime, z0) or not self.xprime(z0):
            return True
        for bpt in self.branchpoints:
            if bpt.location == z0:
                return True
        for dp in self.double_points_xy:
            if z0 in (dp.b, dp.b_bar):
                return True
        res = self.double_point_residual_xy
        if res.degree >= 1 and not res(z0):
            return True
        return False

    def involution_series_at(self, bp, T):
        return involution_series(self, bp, T)

    def __repr__(self):
        return f"SpectralCurve(x={self.x!r}, y={self.y!r}, d={self.d})"


def fiber_vandermonde(curve, x0):
    """Vandermonde vectors for every sheet over a regular rational value."""
    pd = curve.pole_data
    vs = []
    for z0 in curve.fiber(x0):
        if not curve.xprime(z0):
            raise CurveError(f"x'({z0}) = 0 on the fiber")
        vs.append(vandermonde_vector(pd, z0))
    return vs


def normalize_chart(curve):
    """Mobius-rechart so that no pole of x sits at infinity.

    Returns (new_curve, mobius) with new coordinates u, z = mobius(u).  The
    identity map is returned when the chart is already normalized.
    """
    x = curve.x
    if x.num.degree <= x.den.degree:
        return curve, MobiusMap.identity()
    c = Fraction(0)
    for cand in _small_rationals():
        if x.den(cand):
            c = cand
            break
    # z = c + 1/u
    m = MobiusMap(c, 1, 1, 0)
    zmap = m.as_rf()
    new = SpectralCurve(
        x(zmap), curve.y(zmap), None if curve.s is None else curve.s(zmap)
    )
    return new, m


def _small_rationals():
    yield Fraction(0)
    k = 1
    while True:
        yield Fraction(k)
        yield Fraction(-k)
        yield Fraction(1, k + 1)
        yield Fraction(-1, k + 1)
        k += 1
