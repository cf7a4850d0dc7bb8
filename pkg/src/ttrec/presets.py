"""Shipped exact instances: constructors for worked Lax pairs with their
parametrizations and golden values.

Each preset returns the Lax pair, its spectral-curve parametrization, and
the expected constant matrices (C, v, Gamma0), so the generic pipeline
can be validated against independently known answers.  Two synthetic
negative controls are included for exercising the failure paths.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Matrix, Polynomial, RationalFunction, rat, solve_linear
from .curve import SpectralCurve
from .laxpair import LaxError, LaxPair

__all__ = [
    "Preset",
    "airy",
    "painleve6",
    "minimal_model",
    "double_point_demo",
    "bad_auxiliary",
    "bad_pole_dominance",
    "all_presets",
]

_Z = Polynomial.variable()
_X = RationalFunction.variable()


@dataclass
class Preset:
    name: str
    lax: "LaxPair"
    golden: dict = field(default_factory=dict)

    @property
    def curve(self):
        return self.lax.curve


def _rf(p):
    return RationalFunction(p) if isinstance(p, Polynomial) else RationalFunction.const(p)


def _sqrt_exact(q):
    """Exact square root of a non-negative rational, or None."""
    q = rat(q)
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn != q.numerator or rd * rd != q.denominator:
        return None
    return Fraction(rn, rd)


def airy(K=4):
    """The quantized square-root curve: L = [[0,1],[x,0]], (x,y) = (z^2, z)."""
    zero, one = _rf(Fraction(0)), _rf(Fraction(1))
    L0 = Matrix([[zero, one], [_X, zero]])
    curve = SpectralCurve(RationalFunction(_Z**2), RationalFunction(_Z))
    lax = LaxPair(2, K, [L0], params={}, curve=curve)
    golden = {
        "C": Matrix([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]),
        "v": Matrix.identity(2),
        "gamma0": Matrix([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]),
        "branchpoints": [Fraction(0), "inf"],
        "statuses": {"A2": "pass", "A3": "not-checkable", "A4": "pass", "A5": "pass", "A6": "pass"},
    }
    return Preset("airy", lax, golden)


def _ser_mul(a, b, K):
    out = [Fraction(0)] * (K + 1)
    for i, ai in enumerate(a[: K + 1]):
        if not ai:
            continue
        for j, bj in enumerate(b[: K + 1 - i]):
            if bj:
                out[i + j] += ai * bj
    return out


def _ser_inv(a, K):
    out = [Fraction(0)] * (K + 1)
    out[0] = 1 / a[0]
    for k in range(1, K + 1):
        s = sum(a[j] * out[k - j] for j in range(1, k + 1) if j < len(a))
        out[k] = -s / a[0]
    return out


def _fuchsian_subleading(L0, R0, curve, K, t, q0, thetas, theta_inf, a, b):
    """Derive the subleading matrices of the rank-2 Fuchsian pair.

    At the chosen rational parameter point the accessory functions
    (z_0, z_1, z_t, q) acquire corrections at every order in h.  Those
    corrections are pinned down, one exact linear solve per order, by
    two requirements: the projector series must stay regular at the
    double point of the spectral curve (where the leading matrix
    degenerates completely, so the order-k commutator equation forces
    the full right-hand side to vanish there), and the parity relation
    Gamma(h) L(x,-h) = L(x,h)^T Gamma(h) must hold with the constant
    diagonal series Gamma = diag(-t A0_21 - (t-1) A1_21, 1) built from
    the same accessory functions.
    Returns (q series, z series triple, L list, R list) through order K.
    """
    from .correlators import m_series  # deferred: avoids an import cycle

    th0, th1, tht = thetas
    half = Fraction(1, 2)

    def res_at(Lm, x0):
        return Lm.map(lambda e: ((_X - x0) * e)(x0))

    A0 = res_at(L0, Fraction(0))
    A1 = res_at(L0, Fraction(1))
    At = res_at(L0, t)
    z0 = A0[0, 0] - th0 * half
    z1 = A1[0, 0] - th1 * half
    zt = At[0, 0] - tht * half
    poles = [Fraction(0), Fraction(1), t]

    # constant derivative directions of the residue matrices
    dz_dirs = [
        Matrix([[Fraction(1), Fraction(0)], [t * (2 * z0 + th0) / q0, Fraction(-1)]]),
        Matrix([[Fraction(1), Fraction(0)], [-(t - 1) * (2 * z1 + th1) / (q0 - 1), Fraction(-1)]]),
        Matrix([[Fraction(1), Fraction(0)], [t * (t - 1) * (2 * zt + tht) / (q0 - t), Fraction(-1)]]),
    ]
    dq_dirs = [
        Matrix([[Fraction(0), Fraction(-1) / t], [-t * z0 * (z0 + th0) / q0**2, Fraction(0)]]),
        Matrix([[Fraction(0), 1 / (t - 1)], [(t - 1) * z1 * (z1 + th1) / (q0 - 1) ** 2, Fraction(0)]]),
        Matrix([[Fraction(0), -1 / (t * (t - 1))], [-t * (t - 1) * zt * (zt + tht) / (q0 - t) ** 2, Fraction(0)]]),
    ]

    def over_pole(cm, x0):
        return cm.map(lambda e: _rf(e) / (_X - x0))

    pieces = [over_pole(dz_dirs[i], poles[i]) for i in range(3)]
    pieces.append(sum((over_pole(dq_dirs[i], poles[i]) for i in range(3)),
                      Matrix([[_rf(Fraction(0))] * 2] * 2)))

    if q0 == b:
        raise LaxError("double point collides with the branch value b")
    cdp = 1 + (b - a) / (q0 - b)  # square of the double-point parameter
    mod = Polynomial([-cdp, Fraction(0), Fraction(1)])

    def eval_at_dp(f):
        # value alpha + beta*z_dp of a rational function at the double point
        _, rn = divmod(f.num, mod)
        _, rd = divmod(f.den, mod)
        na = rn(Fraction(0))
        nb = rn.coeffs[1] if rn.degree >= 1 else Fraction(0)
        da = rd(Fraction(0))
        db = rd.coeffs[1] if rd.degree >= 1 else Fraction(0)
        det = da * da - db * db * cdp
        if not det:
            raise LaxError("double-point evaluation degenerates")
        return ((na * da - nb * db * cdp) / det, (nb * da - na * db) / det)

    xz = curve.x
    xp = curve.xprime
    zmat = Matrix([[_rf(Fraction(0))] * 2] * 2)

    def commute(Az, Mz):
        return Az * Mz - Mz * Az

    zs = [[z0], [z1], [zt]]
    qs = [q0]
    # nonlinear residue entries (2,1) as series builders
    prefs = [t, -(t - 1), t * (t - 1)]
    shifts = [Fraction(0), Fraction(1), t]
    ths = [th0, th1, tht]

    def entry21_series(i, order):
        zser = zs[i] + [Fraction(0)] * (order + 1 - len(zs[i]))
        qser = qs + [Fraction(0)] * (order + 1 - len(qs))
        num = _ser_mul(zser, [zj + (ths[i] if k == 0 else 0) for k, zj in enumerate(zser)], order)
        den = [qj - (shifts[i] if k == 0 else 0) for k, qj in enumerate(qser)]
        return [prefs[i] * cc for cc in _ser_mul(num, _ser_inv(den, order), order)]

    # parity series Gamma = diag(gamma(h), 1); leading identity is a
    # prerequisite for everything that follows
    gamma0 = -t * A0[1, 0] - (t - 1) * A1[1, 0]
    gmat0 = Matrix([[_rf(gamma0), _rf(Fraction(0))], [_rf(Fraction(0)), _rf(Fraction(1))]])
    defect0 = gmat0 * L0 - L0.transpose() * gmat0
    if not defect0.is_zero():
        raise LaxError("leading parity identity fails")
    gvec = [
        -t * dz_dirs[0][1, 0],
        -(t - 1) * dz_dirs[1][1, 0],
        Fraction(0),
        -t * dq_dirs[0][1, 0] - (t - 1) * dq_dirs[1][1, 0],
    ]
    gammas = [gmat0]
    e11_base = (
        Matrix([[_rf(Fraction(1)), _rf(Fraction(0))], [_rf(Fraction(0))] * 2]) * L0
        - L0.transpose() * Matrix([[_rf(Fraction(1)), _rf(Fraction(0))], [_rf(Fraction(0))] * 2])
    )
    xsamples = [rat(x0) for x0 in (2, 3, 5, 7, 11, 13, 17) if rat(x0) not in poles][:6]

    Ls = [L0]
    unknown_base = None
    par_unknowns = None
    for k in range(1, K + 1):
        g_known = [entry21_series(i, k)[k] for i in range(3)]
        L_known = sum(
            (over_pole(Matrix([[Fraction(0), Fraction(0)], [g_known[i], Fraction(0)]]), poles[i])
             for i in range(3)),
            zmat,
        )
        gamma_known = -t * g_known[0] - (t - 1) * g_known[1]
        ms = m_series(
            LaxPair(2, k - 1, Ls, params={}, curve=curve), curve, K=k - 1
        )
        Ms = [ms.coefficient(j) for j in range(k)]
        rhs_mat = Ms[k - 1].map(lambda e: e.derivative() / xp)
        for j in range(1, k):
            rhs_mat = rhs_mat - commute(_compose_x(Ls[j], xz), Ms[k - j])
        rhs_mat = rhs_mat - commute(_compose_x(L_known, xz), Ms[0])
        if unknown_base is None:
            unknown_base = [-commute(_compose_x(P_, xz), Ms[0]) for P_ in pieces]
        rows, rhs = [], []
        for i in range(2):
            for j in range(2):
                ra, rb = eval_at_dp(rhs_mat[i, j])
                ca, cb = [], []
                for U in unknown_base:
                    ua, ub = eval_at_dp(U[i, j])
                    ca.append(ua)
                    cb.append(ub)
                rows.append(ca)
                rhs.append(-ra)
                rows.append(cb)
                rhs.append(-rb)
        # parity at order k: sum_{l+m=k} (-1)^l Gamma_m L_l - L_l^T Gamma_m = 0
        L_list = Ls + [L_known]
        G_list = gammas + [Matrix([[_rf(gamma_known), _rf(Fraction(0))], [_rf(Fraction(0))] * 2])]
        par_known = zmat
        for l in range(k + 1):
            G = G_list[k - l]
            term = (G * L_list[l]).map(lambda e, s_=(-1) ** l: e * _rf(Fraction(s_)))
            par_known = par_known + term - L_list[l].transpose() * G
        if par_unknowns is None:
            par_unknowns = {}
        if k % 2 not in par_unknowns:
            sgn = _rf(Fraction((-1) ** k))
            built = []
            for p, P_ in enumerate(pieces):
                U = (gmat0 * P_).map(lambda e, s_=sgn: e * s_) - P_.transpose() * gmat0
                if gvec[p]:
                    U = U + e11_base.map(lambda e, cc=gvec[p]: e * _rf(cc))
                built.append(U)
            par_unknowns[k % 2] = built
        for x0 in xsamples:
            for i in range(2):
                for j in range(2):
                    rows.append([U[i, j](x0) for U in par_unknowns[k % 2]])
                    rhs.append(-par_known[i, j](x0))
        # the residue sum at infinity stays h-free (diagonal part); this
        # closes the one-dimensional freedom left at even orders
        rows.append([Fraction(1), Fraction(1), Fraction(1), Fraction(0)])
        rhs.append(Fraction(0))
        res = solve_linear(rows, rhs)
        if not res.consistent or res.kernel:
            raise LaxError(f"subleading order {k} is not uniquely determined")
        sol = res.solution
        for i in range(3):
            zs[i].append(sol[i])
        qs.append(sol[3])
        Lk = L_known
        for coeff, P_ in zip(sol, pieces):
            if coeff:
                Lk = Lk + P_.map(lambda e, cc=coeff: e * _rf(cc))
        Ls.append(Lk)
        gammas.append(Matrix([
            [_rf(gamma_known + sum(gv * s_ for gv, s_ in zip(gvec, sol))), _rf(Fraction(0))],
            [_rf(Fraction(0)), _rf(Fraction(0))],
        ]))

    # auxiliary side: R = -A_t/(x - t) - (q - t)(theta_inf - h) sigma_3 / (2t(t-1))
    gt_full = entry21_series(2, K)
    qt = [q0 - t] + qs[1:]
    Rs = []
    for k in range(K + 1):
        diag_k = zs[2][k] + (tht * Fraction(1, 2) if k == 0 else 0)
        At_k = Matrix([
            [diag_k, -qt[k] / (t * (t - 1))],
            [gt_full[k], -diag_k],
        ])
        c_k = (qt[k] * theta_inf - (qt[k - 1] if k >= 1 else Fraction(0))) / (2 * t * (t - 1))
        Rk = over_pole(At_k, t).map(lambda e: -e)
        Rk = Rk + Matrix([[_rf(-c_k), _rf(Fraction(0))], [_rf(Fraction(0)), _rf(c_k)]])
        Rs.append(Rk)
    if Rs[0] != R0:
        raise LaxError("auxiliary residue reconstruction mismatch")
    return qs, zs, Ls, Rs


def _compose_x(m, inner):
    return m.map(lambda e: e(inner))


_P6_CACHE = {}


def painleve6(
    theta_t=Fraction(1),
    theta_inf=Fraction(2),
    t=Fraction(-337, 144),
    a=Fraction(-9, 16),
    b=Fraction(-16, 9),
    branch=1,
    K=4,
):
    """A rank-2 Fuchsian pair with poles at {0, 1, t}.

    The caller supplies a rational witness (a, b, t, theta_t, theta_inf)
    for which s = sqrt((t-a)(t-b)), sqrt(ab) and sqrt((1-a)(1-b)) are all
    rational; the constructor derives q0, theta_0, theta_1 from it,
    verifies every compatibility relation, and then solves for the
    subleading corrections of the accessory functions order by order
    (see _fuchsian_subleading).  The default witness is
    (t-a)(t-b) = 1, ab = 1, (1-a)(1-b) = (25/12)^2.
    """
    cache_key = (theta_t, theta_inf, t, a, b, branch, K)
    cached = _P6_CACHE.get(cache_key)
    if cached is not None:
        return cached
    t, a, b = rat(t), rat(a), rat(b)
    theta_t, theta_inf = rat(theta_t), rat(theta_inf)
    if t in (0, 1) or a == b or not theta_t or not theta_inf:
        raise LaxError("degenerate parameters")
    s = _sqrt_exact((t - a) * (t - b))
    if s is None or s == 0:
        raise LaxError("(t-a)(t-b) must be a nonzero rational square")
    if branch not in (1, -1):
        raise LaxError("branch must be +-1")
    s = branch * s
    q0 = t + t * (t - 1) * theta_t / (theta_inf * s)
    if q0 in (0, 1, t):
        raise LaxError("q0 collides with a pole")
    r0 = _sqrt_exact(a * b)
    r1 = _sqrt_exact((1 - a) * (1 - b))
    if r0 is None or r1 is None:
        raise LaxError("ab and (1-a)(1-b) must be rational squares")
    theta_0 = theta_inf * q0 * r0 / t
    theta_1 = theta_inf * (q0 - 1) * r1 / (t - 1)
    # consistency of the witness with the quadratic factor (x-a)(x-b)
    lhs_sum = a + b
    rhs_sum = 1 + theta_0**2 * t**2 / (theta_inf**2 * q0**2) - theta_1**2 * (
        t - 1
    ) ** 2 / (theta_inf**2 * (q0 - 1) ** 2)
    lhs_prod = a * b
    rhs_prod = theta_0**2 * t**2 / (theta_inf**2 * q0**2)
    if lhs_sum != rhs_sum or lhs_prod != rhs_prod:
        raise LaxError("witness relations for (a, b) are inconsistent")
    if (q0 - t) * theta_inf * s != t * (t - 1) * theta_t:
        raise LaxError("witness relation for q0 is inconsistent")

    half = Fraction(1, 2)
    mid = (a + b) * half
    den = (_X - t) * s
    # leading auxiliary matrix; all entries rational in x
    R0 = Matrix(
        [
            [
                (_X - mid) * (-theta_t * half) / den,
                _rf(theta_t / theta_inf) / den,
            ],
            [
                _rf(-((b - a) ** 2) * theta_t * theta_inf / 16) / den,
                (_X - mid) * (theta_t * half) / den,
            ],
        ]
    )
    pref = (_X - q0) * _rf(t * (t - 1) / (q0 - t)) / (_X * (_X - 1))
    L0 = R0.map(lambda e: e * pref)

    xz = _rf(b) + _rf(b - a) / RationalFunction(_Z**2 - 1)
    yz = (
        _rf(theta_inf * (b - a) * half)
        * (xz - q0)
        * RationalFunction(_Z)
        / (RationalFunction(_Z**2 - 1) * xz * (xz - 1) * (xz - t))
    )
    sz = (
        _rf((q0 - t) * theta_inf * (b - a) / (2 * t * (t - 1)))
        * RationalFunction(_Z)
        / (RationalFunction(_Z**2 - 1) * (xz - t))
    )
    curve = SpectralCurve(xz, yz, sz)
    q_series, z_series, Ls, Rs = _fuchsian_subleading(
        L0, R0, curve, K, t, q0,
        (theta_0, theta_1, theta_t), theta_inf, a, b,
    )
    params = {
        "t": t,
        "a": a,
        "b": b,
        "q0": q0,
        "theta_0": theta_0,
        "theta_1": theta_1,
        "theta_t": theta_t,
        "theta_inf": theta_inf,
    }
    lax = LaxPair(2, K, Ls, R=Rs, params=params, curve=curve)
    gfac = (b - a) * half
    golden = {
        "C": Matrix([[-gfac, Fraction(0)], [Fraction(0), gfac]]),
        "v": Matrix(
            [
                [Fraction(0), 4 / (theta_inf * (b - a))],
                [Fraction(1), Fraction(0)],
            ]
        ),
        # Gamma0 = (v^T)^{-1} C v^{-1} in this package's conventions; it is
        # proportional to gamma0_shape (the overall scale is immaterial)
        "gamma0": Matrix(
            [
                [gfac**3, Fraction(0)],
                [Fraction(0), -gfac],
            ]
        ),
        "gamma0_shape": Matrix(
            [
                [-(theta_inf**2) * (b - a) ** 2 / 16, Fraction(0)],
                [Fraction(0), Fraction(1)],
            ]
        ),
        "statuses": {"A2": "pass", "A3": "pass", "A4": "pass", "A5": "pass", "A6": "pass"},
        "q_series": q_series,
        "z_series": z_series,
    }
    preset = Preset("painleve6", lax, golden)
    _P6_CACHE[cache_key] = preset
    return preset


def minimal_model(p=3, q=2, t=Fraction(3), K=4, data=None):
    """The (p, q) = (3, 2) polynomial pair from the string-equation family.

    The full solution u(t, h) = u0 + h^2 u2 + h^4 u4 + ... has rational
    coefficients whenever the leading order u0 = sqrt(t/3) is rational:
    6 u0 u2 = u0''/2 and 6 u0 u4 + 3 u2^2 = u2''/2, with the derivative
    chain u0' = 1/(6 u0).  The operator
      L = [[-(h/2)u', u-x], [-(x-u)(x+2u) - (h^2/2)u'', (h/2)u']],
      R = [[0, 1], [x + 2u, 0]],
    is expanded in h through order 4 around u0, with curve x = z^2 - 2u0,
    y = z^3 - 3u0 z, s = -z.  Other (p, q) need caller data and are not
    shipped.
    """
    if (p, q) != (3, 2) or data is not None:
        raise LaxError("only the (3,2) instance ships with built-in data")
    t = rat(t)
    u = _sqrt_exact(t / 3)
    if u is None or u == 0:
        raise LaxError("t/3 must be a nonzero rational square")
    up = 1 / (6 * u)
    upp = -1 / (36 * u**3)
    u2 = upp / (12 * u)
    u2p = 1 / (648 * u**6)
    u2pp = -1 / (648 * u**8)
    u4 = (u2pp / 2 - 3 * u2**2) / (6 * u)
    zero = _rf(Fraction(0))
    # sign layout fixed by the shared eigenframe: on the frame vector
    # (1, -z), L0 has eigenvalue +y(z) and R0 has eigenvalue s(z) = -z;
    # flipping the sign of L relative to its diagonal h-odd part would
    # reintroduce poles of the projector series at the double points
    L0 = Matrix([[zero, u - _X], [-((_X - u) * (_X + 2 * u)), zero]])
    L1 = Matrix([[_rf(-up / 2), zero], [zero, _rf(up / 2)]])
    # (x - u)(x + 2u) expands around u0 with u-derivative x - 4u and
    # second u-derivative -4
    L2 = Matrix([[zero, _rf(u2)], [(_X - 4 * u) * _rf(-u2) + _rf(-upp / 2), zero]])
    L3 = Matrix([[_rf(-u2p / 2), zero], [zero, _rf(u2p / 2)]])
    L4 = Matrix(
        [
            [zero, _rf(u4)],
            [(_X - 4 * u) * _rf(-u4) + _rf(2 * u2**2 - u2pp / 2), zero],
        ]
    )
    R0 = Matrix([[zero, _rf(Fraction(1))], [_X + 2 * u, zero]])
    R2 = Matrix([[zero, zero], [_rf(2 * u2), zero]])
    R4 = Matrix([[zero, zero], [_rf(2 * u4), zero]])
    zmat = Matrix([[zero, zero], [zero, zero]])
    xz = RationalFunction(_Z**2 - Polynomial.const(2 * u))
    yz = RationalFunction(_Z**3 - Polynomial([Fraction(0), 3 * u]))
    sz = RationalFunction(-_Z)
    curve = SpectralCurve(xz, yz, sz)
    params = {"t": t, "u": u, "u2": u2, "u4": u4}
    lax = LaxPair(
        2,
        K,
        [L0, L1, L2, L3, L4][: K + 1],
        R=[R0, zmat, R2, zmat, R4][: K + 1],
        params=params,
        curve=curve,
    )
    C = Matrix([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]])
    v = Matrix([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]])
    golden = {
        "C": C,
        "v": v,
        "gamma0": -C.inverse(),
        "statuses": {"A2": "pass", "A3": "pass", "A4": "pass", "A5": "pass", "A6": "pass"},
    }
    return Preset("minimal_model_3_2", lax, golden)


def double_point_demo(K=4):
    """Preset whose main curve has a rational double point.

    The cubic-flow instance at t = 27 has (x, y) = (z^2 - 6, z^3 - 9z):
    the parameter points +-3 both map to (x, y) = (3, 0), a double point
    away from the branchpoints {0, inf} and with rational coordinates.
    Used to exercise the pole-locus property of the correlators at a
    double point with exact arithmetic.

    Note: a bare companion pair over such a curve (no subleading terms,
    no deformation direction) generically puts double-point poles into
    the projector series; the deformation-consistent tower built here is
    what keeps them away.
    """
    pre = minimal_model(t=Fraction(27), K=K)
    golden = dict(pre.golden)
    golden["double_points"] = [(Fraction(-3), Fraction(3))]
    return Preset("double_point_demo", pre.lax, golden)


def bad_auxiliary(K=2):
    """Negative control: the auxiliary curve self-intersects.

    With x = z^2, s = z(x - 4) = z^3 - 4z, the parameter points +-2 map
    to the same (x, s) = (4, 0): check_A3 must fail with that witness.
    """
    zero, one = _rf(Fraction(0)), _rf(Fraction(1))
    L0 = Matrix([[zero, one], [_X, zero]])
    R0 = L0.map(lambda e: e * (_X - 4))
    curve = SpectralCurve(
        RationalFunction(_Z**2),
        RationalFunction(_Z),
        RationalFunction(_Z**3 - Polynomial([Fraction(0), Fraction(4)])),
    )
    lax = LaxPair(2, K, [L0], R=[R0], params={}, curve=curve)
    return Preset("bad_auxiliary", lax, {"witness": (Fraction(2), Fraction(-2))})


def bad_pole_dominance(K=2):
    """Negative control: a subleading order with a pole the leading order
    does not have (x = 4, pulling back to z = +-2): check_A5 must fail."""
    zero, one = _rf(Fraction(0)), _rf(Fraction(1))
    L0 = Matrix([[zero, one], [_X, zero]])
    L1 = Matrix([[zero, zero], [one / (_X - 4), zero]])
    curve = SpectralCurve(RationalFunction(_Z**2), RationalFunction(_Z))
    lax = LaxPair(2, K, [L0, L1], params={}, curve=curve)
    return Preset("bad_pole_dominance", lax, {"witness": Fraction(4)})


def all_presets(K=4):
    return [airy(K=K), painleve6(K=K), minimal_model(K=K)]


def _golden_value_to_json(v):
    from .serialize import matrix_to_json, rat_to_json

    if isinstance(v, Matrix):
        return {"matrix": matrix_to_json(v, entry=rat_to_json)}
    if isinstance(v, (Fraction, int)):
        return rat_to_json(v)
    if isinstance(v, (list, tuple)):
        return [_golden_value_to_json(e) for e in v]
    if isinstance(v, dict):
        return {k: _golden_value_to_json(e) for k, e in sorted(v.items())}
    return str(v)


def export_presets(dirpath, K=4):
    """Write every preset as JSON next to a *.golden.json sibling."""
    import json
    import os

    written = []
    entries = all_presets(K=K) + [
        double_point_demo(K=K),
        bad_auxiliary(K=min(K, 2)),
        bad_pole_dominance(K=min(K, 2)),
    ]
    for pre in entries:
        base = os.path.join(dirpath, pre.name)
        with open(base + ".json", "w") as fh:
            json.dump(pre.lax.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")
        with open(base + ".golden.json", "w") as fh:
            json.dump(
                {k: _golden_value_to_json(v) for k, v in sorted(pre.golden.items())},
                fh,
                indent=1,
                sort_keys=True,
            )
            fh.write("\n")
        written.append(base + ".json")
    return written
