from fractions import Fraction

import pytest

from ttrec.algebra import INF, Polynomial, RationalFunction
from ttrec.curve import (
    SpectralCurve,
    bergman,
    bilinear,
    double_points,
    fiber_vandermonde,
    global_involution,
    implicit_equation,
    evaluate_bivariate,
    prime_form_sq,
)
from ttrec.laxpair import rational_fiber_samples


def _poly(coeffs):
    return RationalFunction(Polynomial([Fraction(c) for c in coeffs]))


class TestPoleDataAndC:
    def test_airy_C_is_swap(self, airy_pre):
        C = airy_pre.lax.curve.C
        assert C.rows == [[0, 1], [1, 0]]

    def test_C_symmetric_all_presets(self, airy_pre, p6_pre, mm_pre):
        for pre in (airy_pre, p6_pre, mm_pre):
            C = pre.lax.curve.C
            d = len(C.rows)
            for i in range(d):
                for j in range(d):
                    assert C.rows[i][j] == C.rows[j][i]

    def test_fiber_identity(self, airy_pre, p6_pre, mm_pre):
        # V^T C V = Id and V V^T = C^{-1} on rational fibers
        for pre in (airy_pre, p6_pre, mm_pre):
            curve = pre.lax.curve
            xp = curve.xprime
            Cinv = curve.C.inverse()
            for x0, fiber in rational_fiber_samples(curve, 5):
                vs = fiber_vandermonde(curve, x0)
                d = len(vs)
                for i in range(d):
                    for j in range(d):
                        val = bilinear(vs[i], curve.C, vs[j]).value(xp)
                        assert val == (1 if i == j else 0), (pre.name, x0)
                for k in range(d):
                    for l in range(d):
                        acc = Fraction(0)
                        for v in vs:
                            acc += v.entries[k] * v.entries[l] / xp(v.z0)
                        assert acc == Cinv.rows[k][l], (pre.name, x0)


class TestBranchAndDoublePoints:
    def test_airy_branchpoints(self, airy_pre):
        locs = {("inf" if b.location is INF else b.location) for b in airy_pre.lax.curve.branchpoints}
        assert locs == {Fraction(0), "inf"}

    def test_double_point_demo_locus(self, dp_pre):
        curve = dp_pre.lax.curve
        dps = double_points(curve.x, curve.y)
        assert {(dp.b, dp.b_bar) for dp in dps} == {(Fraction(-3), Fraction(3))}
        # both parameter points land on the same (x, y)
        assert curve.x(Fraction(3)) == curve.x(Fraction(-3)) == 3
        assert curve.y(Fraction(3)) == curve.y(Fraction(-3)) == 0

    def test_airy_has_no_double_points(self, airy_pre):
        curve = airy_pre.lax.curve
        assert double_points(curve.x, curve.y) == []


class TestInvolution:
    def test_airy_global_involution(self, airy_pre):
        sigma = global_involution(airy_pre.lax.curve)
        assert sigma is not None
        for z in (Fraction(2), Fraction(-5, 3), Fraction(7)):
            assert sigma(z) == -z

    def test_fiber_consistency(self, mm_pre):
        curve = mm_pre.lax.curve
        for x0, fiber in rational_fiber_samples(curve, 4):
            for z in fiber:
                assert curve.x(z) == x0


class TestKernels:
    def test_bergman_value(self):
        assert bergman(Fraction(3), Fraction(1)) == Fraction(1, 4)

    def test_prime_form_square(self):
        assert prime_form_sq(Fraction(5), Fraction(2)) == 9


class TestImplicitEquation:
    def test_vanishes_on_curve(self, airy_pre, mm_pre):
        for pre in (airy_pre, mm_pre):
            curve = pre.lax.curve
            E = implicit_equation(curve.x, curve.y)
            for z in (Fraction(2), Fraction(-3), Fraction(5, 7)):
                assert evaluate_bivariate(E, curve.x(z), curve.y(z)) == 0

    def test_nonzero_off_curve(self, airy_pre):
        curve = airy_pre.lax.curve
        E = implicit_equation(curve.x, curve.y)
        assert evaluate_bivariate(E, Fraction(4), Fraction(3)) != 0


class TestConstruction:
    def test_rejects_constant_x(self):
        with pytest.raises(Exception):
            SpectralCurve(_poly([3]), _poly([0, 1]))
