"""Exact arithmetic substrate.

Univariate polynomials and rational functions over Q (and over other exact
coefficient fields, used for towers such as series whose coefficients are
rational functions of a spectator variable), Laurent series at a finite
point or at infinity, truncated hbar-series, dense matrices over these
rings, exact linear solving, and rational-function reconstruction from
samples.

Conventions:
  * polynomial coefficients are ascending by degree, no trailing zeros;
  * rational functions are kept gcd-reduced with a monic denominator;
  * the point at infinity is the first-class singleton INF, handled through
    the w = 1/z chart;
  * hbar-series carry their truncation order K; mixed-K arithmetic
    truncates to the minimum so precision never silently inflates.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

from ._kernel import BACKEND, poly_add, poly_divmod, poly_eval, poly_mul, poly_trim

__all__ = [
    "BACKEND",
    "Fraction",
    "INF",
    "AlgebraError",
    "PoleEvaluationError",
    "InconsistentSystemError",
    "ReconstructionError",
    "NonRationalRootError",
    "rat",
    "Polynomial",
    "RationalFunction",
    "LaurentSeries",
    "laurent_at",
    "residue",
    "HbarSeries",
    "Matrix",
    "LinearSolveResult",
    "solve_linear",
    "rational_reconstruct",
    "rational_roots",
    "resultant",
    "bareiss_det",
]


class AlgebraError(Exception):
    """Base class for exact-arithmetic failures."""


class PoleEvaluationError(AlgebraError):
    """Evaluation of a rational function at one of its poles."""


class InconsistentSystemError(AlgebraError):
    """Linear system has no solution."""


class ReconstructionError(AlgebraError):
    """No rational function within the degree bounds fits the samples."""


class NonRationalRootError(AlgebraError):
    """A required root or pole location is not a rational number."""


class _Infinity:
    """The point at infinity on the z-sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __hash__(self):
        return hash("ttrec-point-at-infinity")

    def __eq__(self, other):
        return isinstance(other, _Infinity)


INF = _Infinity()


def rat(value):
    """Coerce ints, Fractions and 'p/q' strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Dense univariate polynomial over an exact field.

    Coefficients default to Fraction but any exact field element works
    (including RationalFunction, giving towers, and Polynomial itself for
    bivariate work where no coefficient division is required).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.coeffs = c

    @classmethod
    def const(cls, value):
        p = cls.__new__(cls)
        p.coeffs = [] if not value else [value]
        return p

    @classmethod
    def variable(cls, one=Fraction(1)):
        return cls([one * 0, one])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        if not self.coeffs:
            raise AlgebraError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant_value(self):
        if len(self.coeffs) > 1:
            raise AlgebraError("polynomial is not constant")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, RationalFunction):
            return other == self
        if not other:
            return not self.coeffs
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __add__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(poly_add(self.coeffs, other.coeffs))
        if isinstance(other, RationalFunction):
            return NotImplemented
        return Polynomial(poly_add(self.coeffs, [other] if other else []))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(poly_mul(self.coeffs, other.coeffs))
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not other:
            return Polynomial()
        return Polynomial([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            return RationalFunction(self, other)
        if isinstance(other, RationalFunction):
            return NotImplemented
        inv = Fraction(1) / other if isinstance(other, (int, Fraction)) else 1 / other
        return self * inv

    def __rtruediv__(self, other):
        return RationalFunction(Polynomial.const(other) if not isinstance(other, Polynomial) else other, self)

    def one_like(self):
        if not self.coeffs or isinstance(self.coeffs[0], (int, Fraction)):
            return Polynomial([Fraction(1)])
        return Polynomial.const(self.coeffs[0] ** 0)

    def __pow__(self, n):
        if n < 0:
            raise AlgebraError("negative polynomial power; use RationalFunction")
        out = self.one_like()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __divmod__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        q, r = poly_divmod(self.coeffs, other.coeffs)
        return Polynomial(q), Polynomial(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise AlgebraError("inexact polynomial division")
        return q

    def monic(self):
        if not self.coeffs:
            return self
        inv = 1 / self.lead if not isinstance(self.lead, (int, Fraction)) else Fraction(1) / self.lead
        return Polynomial([c * inv for c in self.coeffs])

    def gcd(self, other):
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def derivative(self):
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        return poly_eval(self.coeffs, x)

    def shift(self, a):
        """Return p(z + a), expanding around the point a."""
        return self(Polynomial([a, type(a)(1) if isinstance(a, (int, Fraction)) else a ** 0]))

    def reversed(self, at_degree=None):
        """Coefficient reversal: z^d p(1/z) with d = at_degree or degree."""
        d = self.degree if at_degree is None else at_degree
        if d < self.degree:
            raise AlgebraError("reversal degree below actual degree")
        c = [Fraction(0)] * (d + 1)
        for i, ci in enumerate(self.coeffs):
            c[d - i] = ci
        return Polynomial(c)

    def map(self, fn):
        return Polynomial([fn(c) for c in self.coeffs])

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"({c})*z")
            else:
                terms.append(f"({c})*z^{i}")
        return "Poly(" + " + ".join(terms) + ")"


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    import random

    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        f = lambda v: (v * v + c) % n
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = _int_gcd(abs(x - y), n)
        if d != n:
            return d


def _factorize(n):
    """Prime factorization of n >= 1 as a dict prime -> exponent."""
    factors = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return factors


def _divisors(n):
    n = abs(n)
    if n == 0:
        return []
    divs = [1]
    for p, e in _factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    divs.sort()
    return divs


def rational_roots(poly):
    """All rational roots of a polynomial over Q, with multiplicities.

    Returns (roots, residual) where roots is a list of (Fraction, mult)
    sorted ascending and residual is the rootless cofactor (degree 0 when
    the polynomial splits over Q).
    """
    if not poly:
        raise AlgebraError("rational_roots of the zero polynomial")
    den_lcm = 1
    for c in poly.coeffs:
        den_lcm = den_lcm * c.denominator // _int_gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in poly.coeffs]
    g = 0
    for v in ints:
        g = _int_gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    p = Polynomial([Fraction(v) for v in ints])
    roots = []
    val = 0
    while p.coeffs and not p.coeffs[0]:
        p = Polynomial(p.coeffs[1:])
        val += 1
    if val:
        roots.append((Fraction(0), val))
    while p.degree >= 1:
        a0 = int(p.coeffs[0])
        an = int(p.lead)
        # re-clear denominators introduced by deflation
        dl = 1
        for c in p.coeffs:
            dl = dl * c.denominator // _int_gcd(dl, c.denominator)
        a0 = int(p.coeffs[0] * dl)
        an = int(p.lead * dl)
        found = None
        for pn in _divisors(a0):
            for qd in _divisors(an):
                if _int_gcd(pn, qd) != 1:
                    continue
                for cand in (Fraction(pn, qd), Fraction(-pn, qd)):
                    if not p(cand):
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        mult = 0
        lin = Polynomial([-found, Fraction(1)])
        while True:
            q, r = divmod(p, lin)
            if r:
                break
            p = q
            mult += 1
        roots.append((found, mult))
    roots.sort(key=lambda rm: rm[0])
    return roots, p.monic() if p.degree >= 1 else Polynomial.const(Fraction(1))


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Quotient of two polynomials, reduced, denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if not isinstance(num, Polynomial):
            num = Polynomial.const(num if isinstance(num, (Fraction,)) or not isinstance(num, int) else Fraction(num))
        if den is None:
            den = Polynomial([Fraction(1)])
        elif not isinstance(den, Polynomial):
            den = Polynomial.const(den if isinstance(den, (Fraction,)) or not isinstance(den, int) else Fraction(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if reduce:
            if not num:
                den = Polynomial([Fraction(1)]) if isinstance(den.lead, (int, Fraction)) else Polynomial.const(den.lead ** 0)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lead = den.lead
                if lead != 1:
                    inv = (Fraction(1) / lead) if isinstance(lead, (int, Fraction)) else 1 / lead
                    num = num * inv
                    den = den * inv
        self.num = num
        self.den = den

    @classmethod
    def variable(cls):
        return cls(Polynomial.variable())

    @classmethod
    def const(cls, value):
        return cls(Polynomial.const(rat(value) if isinstance(value, (int, str)) else value))

    def __bool__(self):
        return bool(self.num)

    def is_constant(self):
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self):
        if not self.is_constant():
            raise AlgebraError("rational function is not constant")
        return self.num.constant_value()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other, reduce=False)
        return RationalFunction(Polynomial.const(Fraction(other) if isinstance(other, int) else other), reduce=False)

    def __eq__(self, other):
        o = self._coerce(other)
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((tuple(self.num.coeffs), tuple(self.den.coeffs)))

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num = -self.num
        r.den = self.den
        return r

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return (RationalFunction(self.den, self.num)) ** (-n)
        out = RationalFunction(Polynomial([Fraction(1)]), reduce=False)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def derivative(self):
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, x):
        """Evaluate at a point (INF allowed) or compose with a rational map."""
        if x is INF:
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                raise PoleEvaluationError("pole at infinity")
            if dn < dd:
                return Fraction(0)
            return self.num.lead / self.den.lead
        if isinstance(x, (Polynomial, RationalFunction)):
            n = self.num(x)
            d = self.den(x)
            n = n if isinstance(n, (Polynomial, RationalFunction)) else Polynomial.const(n)
            d = d if isinstance(d, (Polynomial, RationalFunction)) else Polynomial.const(d)
            if isinstance(n, RationalFunction) or isinstance(d, RationalFunction):
                n = n if isinstance(n, RationalFunction) else RationalFunction(n)
                d = d if isinstance(d, RationalFunction) else RationalFunction(d)
                return n / d
            return RationalFunction(n, d)
        dv = self.den(x)
        if not dv:
            raise PoleEvaluationError(f"pole at {x}")
        return self.num(x) / dv

    def degree(self):
        return max(self.num.degree, self.den.degree)

    def poles(self):
        """Finite rational poles [(location, order)] plus order at infinity.

        Returns (finite, order_at_inf, residual) with residual the
        non-rational denominator cofactor (constant 1 when all poles are
        rational).
        """
        finite = []
        residual = Polynomial.const(Fraction(1))
        if self.den.degree >= 1:
            roots, residual = rational_roots(self.den)
            finite = roots
        order_inf = max(0, self.num.degree - self.den.degree)
        return finite, order_inf, residual

    def map(self, fn):
        return RationalFunction(self.num.map(fn), self.den.map(fn))

    def __repr__(self):
        if self.den.degree == 0 and self.den == 1:
            return f"RF({self.num!r})"
        return f"RF({self.num!r} / {self.den!r})"


# ---------------------------------------------------------------------------
# Laurent series


class LaurentSeries:
    """Truncated Laurent series at a finite point or at INF.

    Coefficients run over exponents low..order inclusive; at INF the
    expansion variable is w = 1/z and exponents refer to powers of w.
    Binary operations require matching expansion points and truncate to the
    weaker order.
    """

    __slots__ = ("point", "low", "coeffs", "order")

    def __init__(self, point, low, coeffs, order):
        coeffs = list(coeffs)
        if len(coeffs) != order - low + 1:
            raise AlgebraError("Laurent coefficient list length mismatch")
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            low += 1
        if not coeffs:
            low = order + 1
        self.point = point
        self.low = low
        self.coeffs = coeffs
        self.order = order

    @classmethod
    def zero(cls, point, order):
        return cls(point, order + 1, [], order)

    @classmethod
    def const(cls, point, value, order):
        if order < 0 or not value:
            return cls.zero(point, order)
        return cls(point, 0, [value] + [Fraction(0)] * order, order)

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, k):
        if k > self.order:
            raise AlgebraError("coefficient beyond truncation order")
        if k < self.low:
            return Fraction(0)
        return self.coeffs[k - self.low]

    @property
    def residue(self):
        return self.coefficient(-1) if self.order >= -1 else Fraction(0)

    def valuation(self):
        if not self.coeffs:
            return None
        return self.low

    def truncate(self, order):
        if order >= self.order:
            return self
        if order < self.low:
            return LaurentSeries.zero(self.point, order)
        return LaurentSeries(self.point, self.low, self.coeffs[: order - self.low + 1], order)

    def _check(self, other):
        if self.point != other.point:
            raise AlgebraError("Laurent series at different points")

    def __neg__(self):
        return LaurentSeries(self.point, self.low, [-c for c in self.coeffs], self.order)

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.const(self.point, other, self.order)
        self._check(other)
        order = min(self.order, other.order)
        low = min(self.low, other.low, order + 1)
        n = order - low + 1
        out = [Fraction(0)] * n
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.low + i
                if k <= order:
                    out[k - low] = out[k - low] + c
        return LaurentSeries(self.point, low, out, order)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.const(self.point, other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            if not other:
                return LaurentSeries.zero(self.point, self.order)
            return LaurentSeries(self.point, self.low, [c * other for c in self.coeffs], self.order)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(self.point, min(self.order, other.order))
        low = self.low + other.low
        order = min(self.order + other.low, other.order + self.low)
        n = order - low + 1
        if n <= 0:
            return LaurentSeries.zero(self.point, order)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k < n:
                    out[k] = out[k] + a * b
        return LaurentSeries(self.point, low, out, order)

    __rmul__ = __mul__

    def invert(self):
        if self.is_zero():
            raise ZeroDivisionError("inverting a zero Laurent series")
        n = self.order - self.low + 1
        c0 = self.coeffs[0]
        inv0 = (Fraction(1) / c0) if isinstance(c0, (int, Fraction)) else 1 / c0
        out = [inv0] + [Fraction(0)] * (n - 1)
        for k in range(1, n):
            acc = 0
            for j in range(1, k + 1):
                if j < len(self.coeffs):
                    acc = acc + self.coeffs[j] * out[k - j]
            out[k] = -inv0 * acc
        low = -self.low
        return LaurentSeries(self.point, low, out, low + n - 1)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            inv = (Fraction(1) / other) if isinstance(other, (int, Fraction)) else 1 / other
            return self * inv
        return self * other.invert()

    def __pow__(self, n):
        if n == 0:
            return LaurentSeries.const(self.point, Fraction(1), max(self.order, 0))
        base = self if n > 0 else self.invert()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def mul_zpow(self, m):
        """Multiply by (z - point)^m (or w^m at INF)."""
        return LaurentSeries(self.point, self.low + m, self.coeffs, self.order + m)

    def derivative(self):
        """Term-by-term d/d(local coordinate)."""
        out = []
        for i, c in enumerate(self.coeffs):
            k = self.low + i
            out.append(k * c)
        if not out:
            return LaurentSeries.zero(self.point, self.order - 1)
        s = LaurentSeries(self.point, self.low - 1, out, self.order - 1)
        return s

    def polar_coeffs(self):
        """Coefficients of strictly negative exponents, as {exp: coeff}."""
        return {self.low + i: c for i, c in enumerate(self.coeffs) if self.low + i < 0 and c}

    def compose(self, inner):
        """Substitute a series with valuation >= 1 for the local coordinate."""
        if inner.valuation() is None or inner.valuation() < 1:
            raise AlgebraError("composition requires inner valuation >= 1")
        order = min(self.order, inner.order)
        result = LaurentSeries.zero(inner.point, order)
        if self.is_zero():
            return result
        powers = {0: LaurentSeries.const(inner.point, Fraction(1), order)}

        def power(k):
            if k in powers:
                return powers[k]
            if k > 0:
                powers[k] = (power(k - 1) * inner).truncate(order)
            else:
                powers[k] = (power(k + 1) * inner.invert()).truncate(order)
            return powers[k]

        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            result = result + power(self.low + i) * c
        return result

    def __repr__(self):
        var = "w" if self.point is INF else f"(z-{self.point})" if self.point else "z"
        terms = [f"({c})*{var}^{self.low + i}" for i, c in enumerate(self.coeffs) if c]
        return "Laurent[%s; O(%d)](%s)" % (self.point, self.order + 1, " + ".join(terms) or "0")


def laurent_at(f, p, order):
    """Laurent expansion of a rational function at p (INF allowed).

    The returned series S satisfies f - S = O((z-p)^(order+1)) locally
    (powers of w = 1/z at INF).
    """
    if not isinstance(f, RationalFunction):
        f = RationalFunction(f) if isinstance(f, Polynomial) else RationalFunction.const(f)
    if p is INF:
        dn, dd = f.num.degree, f.den.degree
        if not f.num:
            return LaurentSeries.zero(INF, order)
        num_w = f.num.reversed()
        den_w = f.den.reversed()
        shift = dd - dn
        g = RationalFunction(num_w, den_w)
        inner = laurent_at(g, Fraction(0), order - shift if order - shift >= 0 else 0)
        inner = inner.truncate(order - shift)
        return LaurentSeries(INF, inner.low + shift, inner.coeffs, order)
    p = rat(p) if not isinstance(p, Fraction) else p
    if not f.num:
        return LaurentSeries.zero(p, order)
    nu = f.num.shift(p).coeffs
    du = f.den.shift(p).coeffs
    vn = 0
    while vn < len(nu) and not nu[vn]:
        vn += 1
    vd = 0
    while vd < len(du) and not du[vd]:
        vd += 1
    low = vn - vd
    nterms = order - low + 1
    if nterms <= 0:
        return LaurentSeries.zero(p, order)
    a = nu[vn:]
    b = du[vd:]
    inv0 = Fraction(1) / b[0]
    out = []
    for k in range(nterms):
        acc = a[k] if k < len(a) else Fraction(0)
        for j in range(1, k + 1):
            if j < len(b):
                acc = acc - b[j] * out[k - j]
        out.append(acc * inv0)
    return LaurentSeries(p, low, out, order)


def residue(f, p):
    """Residue of f dz at p; at INF this is the residue of -f(1/w)/w^2 dw."""
    if not isinstance(f, RationalFunction):
        f = RationalFunction(f) if isinstance(f, Polynomial) else RationalFunction.const(f)
    if p is INF:
        # res_inf f dz = -[w^{-1}] of f(1/w) / w  ... via the chart dz = -dw/w^2
        dn, dd = f.num.degree, f.den.degree
        order = max(1, dn - dd + 2)
        s = laurent_at(f, INF, order)
        # f(1/w) coefficient of w^1 gives residue of -f(1/w)/w^2 at 0
        return -s.coefficient(1) if s.order >= 1 else Fraction(0)
    s = laurent_at(f, p, 0)
    return s.residue


# ---------------------------------------------------------------------------
# hbar series


class HbarSeries:
    """Truncated series in hbar with arbitrary exact coefficients.

    Exponents run low..K inclusive.  Arithmetic never reads beyond K and
    mixed-K operations truncate to the minimum K.
    """

    __slots__ = ("low", "coeffs", "K")

    def __init__(self, low, coeffs, K):
        coeffs = list(coeffs)
        if len(coeffs) != K - low + 1:
            raise AlgebraError("hbar coefficient list length mismatch")
        while coeffs and _is_zeroish(coeffs[0]):
            coeffs.pop(0)
            low += 1
        if not coeffs:
            low = K + 1
        self.low = low
        self.coeffs = coeffs
        self.K = K

    @classmethod
    def const(cls, value, K, low=0):
        if low > K:
            return cls.zero(K)
        return cls(low, [value] + [0] * (K - low), K)

    @classmethod
    def zero(cls, K):
        return cls(K + 1, [], K)

    @classmethod
    def from_coeffs(cls, coeffs, K, low=0):
        coeffs = list(coeffs)
        want = K - low + 1
        if len(coeffs) < want:
            coeffs = coeffs + [0] * (want - len(coeffs))
        return cls(low, coeffs[:want], K)

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, k):
        if k > self.K:
            raise AlgebraError(f"hbar^{k} beyond truncation K={self.K}")
        if k < self.low:
            return 0
        return self.coeffs[k - self.low]

    def truncate_to(self, K):
        if K >= self.K:
            return self
        if K < self.low:
            return HbarSeries.zero(K)
        return HbarSeries(self.low, self.coeffs[: K - self.low + 1], K)

    def shift(self, m):
        """Multiply by hbar^m."""
        return HbarSeries(self.low + m, self.coeffs, self.K + m)

    def map(self, fn):
        out = HbarSeries.__new__(HbarSeries)
        out.low = self.low
        out.coeffs = [fn(c) for c in self.coeffs]
        out.K = self.K
        return out

    def __neg__(self):
        return self.map(lambda c: -c)

    def _coerce(self, other):
        if isinstance(other, HbarSeries):
            return other
        return HbarSeries.const(other, self.K)

    def __add__(self, other):
        other = self._coerce(other)
        K = min(self.K, other.K)
        low = min(self.low, other.low, K + 1)
        out = [0] * (K - low + 1)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.low + i
                if k <= K:
                    out[k - low] = out[k - low] + c
        return HbarSeries(low, out, K)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HbarSeries):
            return self.map(lambda c: c * other)
        if self.is_zero() or other.is_zero():
            return HbarSeries.zero(min(self.K, other.K))
        low = self.low + other.low
        K = min(self.K + other.low, other.K + self.low)
        n = K - low + 1
        if n <= 0:
            return HbarSeries.zero(K)
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if _is_zeroish(a):
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k < n:
                    out[k] = out[k] + a * b
        return HbarSeries(low, out, K)

    def __rmul__(self, other):
        return self.map(lambda c: other * c)

    def invert(self):
        if self.is_zero():
            raise ZeroDivisionError("inverting the zero hbar-series")
        c0 = self.coeffs[0]
        if isinstance(c0, Matrix):
            inv0 = c0.inverse()
            one = Matrix.identity(c0.nrows)
        else:
            inv0 = (Fraction(1) / c0) if isinstance(c0, (int, Fraction)) else 1 / c0
            one = 1
        n = self.K - self.low + 1
        zero = c0 * 0 if isinstance(c0, Matrix) else inv0 * 0
        out = [inv0]
        for k in range(1, n):
            acc = None
            for j in range(1, k + 1):
                if j < len(self.coeffs):
                    term = self.coeffs[j] * out[k - j]
                    acc = term if acc is None else acc + term
            out.append(-(inv0 * acc) if acc is not None else zero)
        low = -self.low
        return HbarSeries(low, out, low + n - 1)

    def __truediv__(self, other):
        if not isinstance(other, HbarSeries):
            inv = (Fraction(1) / other) if isinstance(other, (int, Fraction)) else 1 / other
            return self * inv
        return self * other.invert()

    def __eq__(self, other):
        other = self._coerce(other)
        K = min(self.K, other.K)
        for k in range(min(self.low, other.low), K + 1):
            a, b = self.coefficient(k), other.coefficient(k)
            if not _eq_zeroish(a, b):
                return False
        return True

    def __repr__(self):
        terms = [f"h^{self.low + i}*({c!r})" for i, c in enumerate(self.coeffs)]
        return "Hbar[K=%d](%s)" % (self.K, " + ".join(terms) or "0")


def _is_zeroish(c):
    if isinstance(c, Matrix):
        return c.is_zero()
    return not c


def _eq_zeroish(a, b):
    if isinstance(a, Matrix) or isinstance(b, Matrix):
        return (a - b).is_zero()
    return a == b


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Dense matrix over an exact commutative ring (duck-typed entries)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        if not self.rows or any(len(r) != len(self.rows[0]) for r in self.rows):
            raise AlgebraError("ragged or empty matrix")

    @classmethod
    def identity(cls, n, one=Fraction(1), zero=Fraction(0)):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n, m=None, zero=Fraction(0)):
        m = n if m is None else m
        return cls([[zero for _ in range(m)] for _ in range(n)])

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def is_square(self):
        return self.nrows == self.ncols

    def is_zero(self):
        return all(not _nonzero(e) for r in self.rows for e in r)

    def map(self, fn):
        return Matrix([[fn(e) for e in r] for r in self.rows])

    def transpose(self):
        return Matrix([list(col) for col in zip(*self.rows)])

    def trace(self):
        acc = self.rows[0][0]
        for i in range(1, self.nrows):
            acc = acc + self.rows[i][i]
        return acc

    def __neg__(self):
        return self.map(lambda e: -e)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            if not other:
                return self
            raise AlgebraError("cannot add a nonzero scalar to a matrix")
        return Matrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return self + (-other)
        return Matrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise AlgebraError("matrix dimension mismatch")
            ot = other.transpose().rows
            out = []
            for r in self.rows:
                row = []
                for c in ot:
                    acc = r[0] * c[0]
                    for a, b in zip(r[1:], c[1:]):
                        acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return Matrix(out)
        if isinstance(other, (list, tuple)):
            if self.ncols != len(other):
                raise AlgebraError("matrix-vector dimension mismatch")
            out = []
            for r in self.rows:
                acc = r[0] * other[0]
                for a, b in zip(r[1:], other[1:]):
                    acc = acc + a * b
                out.append(acc)
            return out
        return self.map(lambda e: e * other)

    def __rmul__(self, other):
        return self.map(lambda e: other * e)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def det(self):
        """Determinant by cofactor expansion (intended for small d)."""
        if not self.is_square():
            raise AlgebraError("determinant of a non-square matrix")
        n = self.nrows
        if n == 1:
            return self.rows[0][0]
        if n == 2:
            (a, b), (c, d) = self.rows
            return a * d - b * c
        acc = None
        for j in range(n):
            e = self.rows[0][j]
            if not _nonzero(e):
                continue
            minor = Matrix([r[:j] + r[j + 1 :] for r in self.rows[1:]])
            term = e * minor.det()
            if j % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            e = self.rows[0][0]
            return e * 0 if not isinstance(e, (int, Fraction)) else Fraction(0)
        return acc

    def inverse(self):
        """Inverse over a coefficient field (entries must support division)."""
        if not self.is_square():
            raise AlgebraError("inverse of a non-square matrix")
        n = self.nrows
        cols = solve_linear(self, None, invert=True)
        return cols

    def __repr__(self):
        return "Matrix(%s)" % self.rows


def _nonzero(e):
    if isinstance(e, Matrix):
        return not e.is_zero()
    if isinstance(e, HbarSeries):
        return not e.is_zero()
    return bool(e)


def _entry_complexity(e):
    if isinstance(e, RationalFunction):
        return e.num.degree + e.den.degree
    if isinstance(e, Polynomial):
        return e.degree
    if isinstance(e, Fraction):
        return e.numerator.bit_length() + e.denominator.bit_length()
    return 0


class LinearSolveResult:
    """Outcome of an exact linear solve.

    Attributes: solution (particular solution with free variables set to
    zero, or None when inconsistent), rank, kernel (basis of the null
    space), consistent (bool).
    """

    __slots__ = ("solution", "rank", "kernel", "consistent")

    def __init__(self, solution, rank, kernel, consistent):
        self.solution = solution
        self.rank = rank
        self.kernel = kernel
        self.consistent = consistent


def solve_linear(A, b, invert=False):
    """Exact Gaussian elimination over a coefficient field.

    A is a Matrix (or row list) with field entries; b a vector or None for
    a homogeneous system.  Pivots are chosen by minimal entry complexity
    (degree for rational functions) to control coefficient growth.  When
    invert=True, A must be square nonsingular and the inverse Matrix is
    returned instead of a LinearSolveResult.
    """
    rows = [list(r) for r in (A.rows if isinstance(A, Matrix) else A)]
    m = len(rows)
    n = len(rows[0]) if m else 0
    if invert:
        rhs = [[Fraction(1) if i == j else Fraction(0) for j in range(m)] for i in range(m)]
        one = None
        for r in rows:
            for e in r:
                if isinstance(e, RationalFunction):
                    one = RationalFunction.const(Fraction(1))
                    break
            if one is not None:
                break
        if one is not None:
            rhs = [[one if i == j else one * 0 for j in range(m)] for i in range(m)]
    elif b is not None:
        rhs = [[v] for v in b]
    else:
        rhs = [[] for _ in range(m)]
    piv_cols = []
    row_at = 0
    for col in range(n):
        best = None
        for i in range(row_at, m):
            e = rows[i][col]
            if _nonzero(e):
                c = _entry_complexity(e)
                if best is None or c < best[1]:
                    best = (i, c)
        if best is None:
            continue
        i = best[0]
        rows[row_at], rows[i] = rows[i], rows[row_at]
        rhs[row_at], rhs[i] = rhs[i], rhs[row_at]
        piv = rows[row_at][col]
        inv = (Fraction(1) / piv) if isinstance(piv, (int, Fraction)) else 1 / piv
        rows[row_at] = [e * inv for e in rows[row_at]]
        rhs[row_at] = [e * inv for e in rhs[row_at]]
        for i2 in range(m):
            if i2 == row_at:
                continue
            f = rows[i2][col]
            if _nonzero(f):
                rows[i2] = [a - f * bnd for a, bnd in zip(rows[i2], rows[row_at])]
                rhs[i2] = [a - f * bnd for a, bnd in zip(rhs[i2], rhs[row_at])]
        piv_cols.append(col)
        row_at += 1
        if row_at == m:
            break
    rank = len(piv_cols)
    consistent = True
    for i in range(rank, m):
        if any(_nonzero(e) for e in rhs[i]):
            consistent = False
            break
    if invert:
        if rank < n or not consistent or m != n:
            raise InconsistentSystemError("matrix is singular")
        inv_rows = [[None] * n for _ in range(n)]
        for r_idx, col in enumerate(piv_cols):
            inv_rows[col] = rhs[r_idx]
        return Matrix(inv_rows)
    free_cols = [c for c in range(n) if c not in piv_cols]
    kernel = []
    for fc in free_cols:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for r_idx, col in enumerate(piv_cols):
            vec[col] = -rows[r_idx][fc]
        kernel.append(vec)
    solution = None
    if consistent and b is not None:
        solution = [Fraction(0)] * n
        for r_idx, col in enumerate(piv_cols):
            solution[col] = rhs[r_idx][0]
    return LinearSolveResult(solution, rank, kernel, consistent)


def bareiss_det(rows, exact_div=None):
    """Fraction-free determinant over an integral domain with exact division."""
    rows = [list(r) for r in rows]
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if exact_div is None:
        def exact_div(a, b):
            if isinstance(a, Polynomial):
                return a.exact_div(b if isinstance(b, Polynomial) else Polynomial.const(b))
            return a / b
    sign = 1
    prev = None
    for k in range(n - 1):
        if not _nonzero(rows[k][k]):
            swap = next((i for i in range(k + 1, n) if _nonzero(rows[i][k])), None)
            if swap is None:
                return rows[0][0] * 0 if not isinstance(rows[0][0], (int, Fraction)) else Fraction(0)
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                val = rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]
                if prev is not None:
                    val = exact_div(val, prev)
                rows[i][j] = val
        prev = rows[k][k]
    d = rows[n - 1][n - 1]
    return d if sign == 1 else -d


def resultant(p, q):
    """Resultant of two polynomials via the Sylvester matrix (Bareiss)."""
    m, n = p.degree, q.degree
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0 and n == 0:
        return Fraction(1) if isinstance(p.coeffs[0], (int, Fraction)) else p.coeffs[0] ** 0
    size = m + n
    zero = p.coeffs[0] * 0 if not isinstance(p.coeffs[0], (int, Fraction)) else Fraction(0)
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - n - 1 - i))
    return bareiss_det(rows)


# ---------------------------------------------------------------------------
# reconstruction


def rational_reconstruct(samples, deg_num, deg_den):
    """Recover a rational function of bounded degree from point samples.

    samples: list of (point, value) with distinct points, none a pole of
    the target.  Requires at least deg_num + deg_den + 2 samples; the last
    two are held out and used purely for verification.  Raises
    ReconstructionError when no function within the bounds matches.
    """
    if len(samples) < deg_num + deg_den + 2:
        raise ReconstructionError(
            f"need at least {deg_num + deg_den + 2} samples, got {len(samples)}"
        )
    pts = [p for p, _ in samples]
    if len(set(pts)) != len(pts):
        raise ReconstructionError("sample points must be distinct")
    train = samples[:-2]
    rows = []
    for z, v in train:
        zp = Fraction(1)
        row = []
        for _ in range(deg_num + 1):
            row.append(zp)
            zp = zp * z
        zp = Fraction(1)
        for _ in range(deg_den + 1):
            row.append(-v * zp)
            zp = zp * z
        rows.append(row)
    res = solve_linear(rows, [Fraction(0)] * len(rows))
    for vec in res.kernel:
        num = Polynomial(vec[: deg_num + 1])
        den = Polynomial(vec[deg_num + 1 :])
        if not den:
            continue
        f = RationalFunction(num, den)
        try:
            if all(f(z) == v for z, v in samples):
                return f
        except PoleEvaluationError:
            continue
    raise ReconstructionError("no interpolant within the degree bounds")
