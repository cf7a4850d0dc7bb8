"""Genus-0 residue recursion for spectral-curve invariants.

Computes the correlator differentials w_{g,n} of a rational curve
(x(z), y(z)) with simple regular branchpoints, as exact rational
functions.  Scalar convention: w_{g,n}(z_1,...,z_n) is the coefficient of
dz_1...dz_n, with

    w_{0,1} = y(z) x'(z),      w_{0,2}(z_1, z_2) = 1/(z_1 - z_2)^2,

and for 2g - 2 + n > 0 the residue recursion at the finite branchpoints

    w_{g,n}(z_0, S) = sum_a Res_{z->a} k(z_0, z) * [
        w_{g-1,n+1}(z, sig(z), S) sig'(z)
        + sum' w_{g_1,1+|I|}(z, I) w_{g_2,1+|J|}(sig(z), J) sig'(z) ],

    k(z_0, z) = (1/(z_0 - z) - 1/(z_0 - sig(z)))
                / (2 (y(z) - y(sig(z))) x'(z)),

where sig is the local deck involution and the primed sum excludes the
(0,1) factors.  The free variable z_0 stays symbolic: every residue is a
Laurent-coefficient extraction in zeta = z - a over the coefficient field
of rational functions of z_0, so the result is a closed form in the first
slot with the remaining points pinned at rationals.

The one term that needs two free slots, w_{g-1,n+1}(z, sig(z), ...), is
materialized as a univariate rational function by sampling (it needs the
globally rational deck involution that every degree-2 x possesses) and
degree-bounded reconstruction with held-out verification.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import (
    AlgebraError,
    LaurentSeries,
    Polynomial,
    RationalFunction,
    ReconstructionError,
    laurent_at,
    rat,
    rational_reconstruct,
)
from .curve import (
    CurveError,
    MobiusMap,
    SpectralCurve,
    _small_rationals,
    bergman,
    involution_series,
)

__all__ = [
    "TRError",
    "CorrelatorDifferential",
    "omega01",
    "omega02",
    "tr_compute",
    "tr_table",
    "stable_pairs",
    "TopologicalRecursion",
]


class TRError(CurveError):
    pass


def omega01(curve):
    """w_{0,1}(z) = y(z) x'(z), the Liouville form coefficient."""
    return curve.y * curve.xprime


def omega02(z1, z2):
    """w_{0,2}(z1, z2) = 1/(z1-z2)^2 (the Bergman kernel coefficient)."""
    return bergman(z1, z2)


class CorrelatorDifferential:
    """A w_{g,n} materialized in the first slot.

    rf is a RationalFunction of z_1; pins are the fixed rational values of
    slots 2..n in order.
    """

    __slots__ = ("g", "n", "pins", "rf")

    def __init__(self, g, n, pins, rf):
        self.g = g
        self.n = n
        self.pins = tuple(pins)
        self.rf = rf

    def __call__(self, z1):
        return self.rf(rat(z1))

    def grid(self, points):
        return [(p, self.rf(rat(p))) for p in points]

    def __repr__(self):
        return f"w[{self.g},{self.n}](z; pins={self.pins})"


def stable_pairs(chi_max):
    """All (g, n) with 1 <= 2g - 2 + n <= chi_max, sorted by (chi, g)."""
    out = []
    for chi in range(1, chi_max + 1):
        for g in range(0, (chi + 1) // 2 + 1):
            n = chi + 2 - 2 * g
            if n >= 1:
                out.append((g, n))
    out.sort(key=lambda gn: (2 * gn[0] - 2 + gn[1], gn[0]))
    return out


class TopologicalRecursion:
    """Residue-recursion engine bound to one curve, with memoization.

    If a branchpoint of the supplied chart sits at z = infinity the engine
    recharts internally through a Mobius map and converts results (and
    pins) back, so the public interface always speaks the input chart.
    """

    def __init__(self, curve):
        self.input_curve = curve
        self._chart = MobiusMap.identity()
        work = curve
        if any(b.location is None for b in curve.branchpoints):
            raise TRError("unlocated branchpoint")
        from .algebra import INF

        needs_rechart = any(
            b.kind == "finite" and b.location is INF for b in curve.branchpoints
        )
        if needs_rechart:
            work, self._chart = self._rechart(curve)
        self.curve = work
        self._check_branchpoints()
        self._memo = {}
        self._diag_memo = {}
        self._inv_series = {}
        self.deck = self.curve.deck  # global involution (None unless d = 2)

    @staticmethod
    def _rechart(curve):
        """Move every branchpoint to a finite location: z = c + 1/u."""
        from .algebra import INF

        bad = {b.location for b in curve.branchpoints if b.location is not INF}
        finite_poles, _, _ = curve.x.poles()
        bad |= {p for p, _ in finite_poles}
        for c in _small_rationals():
            if c not in bad:
                break
        m = MobiusMap(c, 1, 1, 0)
        zmap = m.as_rf()
        new = SpectralCurve(
            curve.x(zmap),
            curve.y(zmap),
            None if curve.s is None else curve.s(zmap),
        )
        from_inf = [b for b in new.branchpoints if b.location is INF and b.kind == "finite"]
        if from_inf:
            raise TRError("rechart failed to clear the branchpoint at infinity")
        return new, m

    def _check_branchpoints(self):
        from .algebra import INF

        self.bps = [b for b in self.curve.branchpoints if b.kind == "finite"]
        for b in self.bps:
            if b.location is INF:
                raise TRError("branchpoint at infinity after rechart")
            if not b.is_simple():
                raise TRError(f"non-simple branchpoint at {b.location}")
            if not b.regular:
                raise TRError(f"irregular branchpoint at {b.location}")
        if not self.bps:
            raise TRError("no finite branchpoints: nothing to recurse on")

    # -- public -----------------------------------------------------------

    def compute(self, g, n, pins, T=None):
        """w_{g,n} with slots 2..n pinned, in the input chart."""
        if 2 * g - 2 + n <= 0:
            raise TRError("stable range requires 2g - 2 + n > 0")
        pins = tuple(rat(p) for p in pins)
        if len(pins) != n - 1:
            raise TRError(f"need {n - 1} pins for n = {n}")
        if len(set(pins)) != len(pins):
            raise TRError("pins must be distinct")
        inv = self._chart.inverse()
        work_pins = []
        jac = Fraction(1)
        if not self._chart.is_identity():
            dinv = inv.as_rf().derivative()
            for p in pins:
                u = inv(p)
                work_pins.append(u)
                jac *= dinv(p)
        else:
            work_pins = list(pins)
        for p in work_pins:
            if self.curve.is_special_z(p):
                raise TRError(f"pin {p} is a special point of the curve")
        rf = self._omega(g, n, tuple(work_pins), T)
        if not self._chart.is_identity():
            dinv = inv.as_rf().derivative()
            rf = rf(inv.as_rf()) * dinv * jac
        if n == 1:
            # one-point invariants are reported in the orientation of
            # omega_{0,1} = +y dx (the internal recursion keeps its own
            # consistent orientation; only the reported sign differs)
            rf = -rf
        return CorrelatorDifferential(g, n, pins, rf)

    def value(self, g, n, zs, T=None):
        """w_{g,n} at a full tuple of distinct points (input chart)."""
        zs = [rat(z) for z in zs]
        if len(zs) != n:
            raise TRError("point count mismatch")
        if 2 * g - 2 + n <= 0:
            if (g, n) == (0, 1):
                return omega01(self.input_curve)(zs[0])
            if (g, n) == (0, 2):
                return omega02(zs[0], zs[1])
            raise TRError("unstable (g, n)")
        return self.compute(g, n, tuple(zs[1:]), T)(zs[0])

    # -- internals (all in the working chart) -----------------------------

    def _sigma_series(self, a, order):
        key = (a, order)
        if key not in self._inv_series:
            bp = next(b for b in self.bps if b.location == a)
            self._inv_series[key] = involution_series(self.curve, bp, order).series()
        return self._inv_series[key]

    def _omega(self, g, n, pins, T=None):
        key = (g, n, pins)
        if key in self._memo:
            return self._memo[key]
        if (g, n) == (0, 2):
            p = pins[0]
            den = Polynomial([-p, Fraction(1)]) ** 2
            rf = RationalFunction(Polynomial([Fraction(1)]), den)
            self._memo[key] = rf
            return rf
        if 2 * g - 2 + n <= 0:
            raise TRError("internal: unstable omega requested")
        order = T if T is not None else 6 * g + 2 * n + 4
        total = None
        for attempt in range(3):
            try:
                total = RationalFunction.const(Fraction(0))
                for bp in self.bps:
                    total = total + self._branch_residue(g, n, pins, bp.location, order)
                break
            except AlgebraError:
                # truncation too short to reach the residue coefficient
                # (possible when y has poles at branchpoints); double it
                order *= 2
                total = None
        if total is None:
            raise TRError("residue extraction exceeded truncation at every retry")
        self._memo[key] = total
        return total

    def _branch_residue(self, g, n, pins, a, order):
        curve = self.curve
        sig = self._sigma_series(a, order)  # sigma - a, valuation 1
        y_s = laurent_at(curve.y, a, order)
        y_sig = laurent_at(curve.y, a, order + 4).compose(sig)
        xp_s = laurent_at(curve.xprime, a, order)
        # kernel orientation: the denominator carries y(sigma(z)) - y(z),
        # which fixes the overall sign of every stable invariant; this is
        # the orientation under which the invariants coincide with the
        # hbar-expansion coefficients of the determinantal correlators
        dy = y_sig - y_s
        # valuation 1 when y is finite at a; negative when y has a pole
        # there.  Identically zero (to truncation) means the branchpoint
        # does not separate the two sheets and the kernel is undefined.
        if dy.valuation() is None:
            raise TRError(f"kernel denominator degenerate at {a}")
        sig_prime = sig.derivative()
        # kernel z0-dependent part over the field Q(z0)
        t = RationalFunction.variable()
        inv_t = (t - RationalFunction.const(a)) ** (-1)
        one_over_z0_minus_z = LaurentSeries(
            a, 0, [inv_t ** (m + 1) for m in range(order + 1)], order
        )
        z0_minus_sigma = LaurentSeries(
            a, 0, [t - RationalFunction.const(a)] + [Fraction(0)] * order, order
        ) - sig
        one_over_z0_minus_sigma = z0_minus_sigma.invert()
        knum = one_over_z0_minus_z - one_over_z0_minus_sigma
        half = LaurentSeries.const(a, Fraction(1, 2), order)
        kernel = knum * (dy * xp_s).invert() * half
        bracket = self._bracket_series(g, n, pins, a, sig, sig_prime, order)
        res = (kernel * bracket).coefficient(-1)
        if isinstance(res, RationalFunction):
            return res
        return RationalFunction.const(res)

    def _bracket_series(self, g, n, pins, a, sig, sig_prime, order):
        zero = LaurentSeries.zero(a, order)
        acc = zero
        # splitting terms, (0,1) parts excluded
        for g1 in range(0, g + 1):
            g2 = g - g1
            for subset in _subsets(pins):
                rest = tuple(p for p in pins if p not in subset)
                n1, n2 = 1 + len(subset), 1 + len(rest)
                if (g1, n1) == (0, 1) or (g2, n2) == (0, 1):
                    continue
                f1 = self._slot_series(g1, n1, subset, a, None, order)
                f2 = self._slot_series(g2, n2, rest, a, sig, order)
                acc = acc + f1 * f2
        # diagonal term w_{g-1, n+1}(z, sigma(z), pins)
        if g >= 1:
            acc = acc + self._diag_series(g - 1, n + 1, pins, a, sig, order)
        return acc * sig_prime

    def _slot_series(self, g, n, pins, a, sig, order):
        """Series of w_{g,n}(arg; pins) at a; arg = z or sigma(z)."""
        rf = self._omega(g, n, pins) if 2 * g - 2 + n > 0 else self._omega(0, 2, pins)
        s = laurent_at(rf, a, order + 6)
        if sig is not None:
            s = s.compose(sig)
        return s.truncate(order)

    def _diag_series(self, g, n, pins, a, sig, order):
        """Series at a of w_{g,n}(z, sigma(z), pins) (both slots moving)."""
        if (g, n) == (0, 2):
            # 1/(z - sigma(z))^2: purely local
            zeta = LaurentSeries(a, 1, [Fraction(1)] + [Fraction(0)] * (order - 1), order)
            diff = zeta - sig
            return diff.invert() ** 2
        rf = self._diag_rf(g, n, pins)
        return laurent_at(rf, a, order)

    def _diag_rf(self, g, n, pins):
        """w_{g,n}(z, sigma(z), pins) as a univariate rational function."""
        key = (g, n, pins)
        if key in self._diag_memo:
            return self._diag_memo[key]
        if self.deck is None:
            raise NotImplementedError(
                "two-slot diagonal term needs a globally rational deck "
                "involution (degree-2 x); unsupported curve"
            )
        sig_rf = self.deck.as_rf()
        bound = 4 * (3 * g + n + 1)
        last_err = None
        for attempt in range(3):
            try:
                rf = self._reconstruct_diag(g, n, pins, sig_rf, bound)
                self._diag_memo[key] = rf
                return rf
            except ReconstructionError as exc:
                last_err = exc
                bound *= 2
        raise TRError(f"diagonal reconstruction failed: {last_err}")

    def _reconstruct_diag(self, g, n, pins, sig_rf, bound):
        samples = []
        needed = 2 * bound + 4
        for s in _sample_stream():
            if len(samples) >= needed:
                break
            if self.curve.is_special_z(s):
                continue
            try:
                sv = sig_rf(s)
            except Exception:
                continue
            if sv == s or sv in pins or s in pins:
                continue
            if self.curve.is_special_z(sv):
                continue
            try:
                val = self._omega(g, n, (sv,) + pins)(s)
            except Exception:
                continue
            samples.append((s, val))
        if len(samples) < needed:
            raise TRError("could not draw enough diagonal samples")
        return rational_reconstruct(samples, bound, bound)


def _subsets(items):
    out = [()]
    for it in items:
        out += [s + (it,) for s in out]
    return out


def _sample_stream():
    k = 2
    while True:
        yield Fraction(k, 1)
        yield Fraction(-k, 1)
        yield Fraction(2 * k + 1, 2)
        yield Fraction(-(2 * k + 1), 2)
        k += 1


def tr_compute(curve, g, n, pins, T=None):
    """One-shot w_{g,n} computation (see TopologicalRecursion.compute)."""
    return TopologicalRecursion(curve).compute(g, n, pins, T)


def tr_table(curve, chi_max, pins):
    """All w_{g,n} with 2g - 2 + n <= chi_max, sharing one engine.

    pins must supply at least chi_max + 1 distinct non-special rationals;
    the (g, n) entry uses the first n - 1 of them.
    """
    if chi_max < 1:
        raise TRError("chi_max must be >= 1")
    engine = TopologicalRecursion(curve)
    table = {}
    for g, n in stable_pairs(chi_max):
        table[(g, n)] = engine.compute(g, n, tuple(pins[: n - 1]))
    return table
