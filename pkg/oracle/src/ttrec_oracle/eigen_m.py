"""Projector series by eigenbasis recursion (rank-2 instances).

Independent route to the matrices M^(k): conjugate the defining ODE
hbar dM/dx = [L, M] into the eigenbasis of L^(0) on the curve.  With
V(z) the eigenvector matrix for the eigenvalues y(z), y(sigma(z))
(sigma the deck transformation swapping the two sheets), writing
tM = V^-1 M V and U = V^-1 dV/dx, the order-k part of the ODE reads

    [Lambda, tM_k] = dx(tM_{k-1}) + [U, tM_{k-1}] - sum_l [tL_l, tM_{k-l}]

which determines the off-diagonal entries of tM_k by dividing by
+-(y(z) - y(sigma(z))).  The diagonal entries follow from the projector
identity tM^2 = tM expanded at order k:

    (1 - 2 tM0_ii) tM_k_ii = sum_{l=0}^{k} sum_{j != i} tM_l_ij tM_{k-l}_ji
                             + sum_{l=1}^{k-1} tM_l_ii tM_{k-l}_ii

with tM_0 = diag(1, 0).  Everything is plain sympy rational-function
algebra in z; no linear solves, no shared code with the main engine.
"""

import sympy as sp

from .io import Z


def deck_involution(x_expr):
    """The non-identity solution w(z) of x(w) = x(z) for a degree-2 map."""
    w = sp.Symbol("w")
    num, den = sp.fraction(sp.together(x_expr.subs(Z, w) - x_expr))
    roots = sp.solve(sp.expand(num), w)
    for r in roots:
        if sp.simplify(r - Z) != 0:
            return sp.cancel(r)
    raise ValueError("no deck transformation found")


def m_series(L, curve, K):
    """Return [M0, M1, ..., MK] as sympy matrices of rationals in z."""
    x_expr, y_expr = curve["x"], curve["y"]
    sigma = deck_involution(x_expr)
    lam1 = y_expr
    lam2 = sp.cancel(y_expr.subs(Z, sigma))
    xp = sp.diff(x_expr, Z)

    x = sp.Symbol("x")
    L0 = L[0].subs(x, x_expr).applyfunc(sp.cancel)
    # eigenvector (L0_12, lam - L0_11) for eigenvalue lam
    def eigvec(lam):
        if sp.simplify(L0[0, 1]) != 0:
            return sp.Matrix([L0[0, 1], lam - L0[0, 0]])
        return sp.Matrix([lam - L0[1, 1], L0[1, 0]])

    V = sp.Matrix.hstack(eigvec(lam1), eigvec(lam2)).applyfunc(sp.cancel)
    Vinv = V.inv().applyfunc(sp.cancel)

    def d_dx(mat):
        return mat.applyfunc(lambda e: sp.cancel(sp.diff(e, Z) / xp))

    U = (Vinv * d_dx(V)).applyfunc(sp.cancel)
    tL = [(Vinv * Lk.subs(x, x_expr) * V).applyfunc(sp.cancel) for Lk in L]

    gap = sp.cancel(lam1 - lam2)
    tM = [sp.Matrix([[1, 0], [0, 0]])]
    for k in range(1, K + 1):
        rhs = d_dx(tM[k - 1]) + (U * tM[k - 1] - tM[k - 1] * U)
        for l in range(1, min(k, len(tL) - 1) + 1):
            rhs -= tL[l] * tM[k - l] - tM[k - l] * tL[l]
        rhs = rhs.applyfunc(sp.cancel)
        mk = sp.zeros(2, 2)
        mk[0, 1] = sp.cancel(rhs[0, 1] / gap)
        mk[1, 0] = sp.cancel(-rhs[1, 0] / gap)
        for i in range(2):
            sign = -1 if i == 0 else 1  # 1 - 2*tM0_ii
            acc = sp.Integer(0)
            for l in range(0, k + 1):
                a = mk if l == k else tM[l]
                b = mk if k - l == k else tM[k - l]
                # only terms not involving the unknown diagonal entry
                j = 1 - i
                acc += a[i, j] * b[j, i]
            for l in range(1, k):
                acc += tM[l][i, i] * tM[k - l][i, i]
            mk[i, i] = sp.cancel(acc / sign)
        tM.append(mk.applyfunc(sp.cancel))

    return [(V * m * Vinv).applyfunc(sp.cancel) for m in tM]
