import itertools
from fractions import Fraction

import pytest

from ttrec.correlators import (
    CorrelatorError,
    hat_w1_series_rf,
    loop_eq_check,
    m_series,
    tau_t_derivative,
    w1_series_rf,
    w_connected,
    w_connected_series,
    w_nonconnected,
)
from ttrec.serialize import rf_from_json

from conftest import load_fixture


class TestMSeriesFixtures:
    def test_airy_m1_m2_match_eigenbasis_oracle(self, airy_ms):
        fix = load_fixture("airy_m_series.json")
        for key, k in (("M1", 1), ("M2", 2)):
            expected = fix["expected"][key]
            got = airy_ms.coefficient(k)
            for i in range(2):
                for j in range(2):
                    assert not (got[i, j] - rf_from_json(expected[i][j])), (key, i, j)

    def test_structural_identities(self, airy_ms, mm_ms):
        assert airy_ms.verify()
        assert mm_ms.verify()

    def test_m0_is_rank_one_projector(self, airy_ms):
        m0 = airy_ms.coefficient(0)
        prod = m0 * m0
        for i in range(2):
            for j in range(2):
                assert not (prod[i, j] - m0[i, j])
        assert m0.trace()(Fraction(3)) == 1


class TestOnePoint:
    def test_leading_is_y(self, all_ms):
        for name, ms in all_ms.items():
            w1 = w1_series_rf(ms)
            assert not (w1.coefficient(-1) - ms.curve.y), name

    def test_order_zero_vanishes_identically(self, all_ms):
        for name, ms in all_ms.items():
            w1 = w1_series_rf(ms)
            assert not w1.coefficient(0), name

    def test_hat_w1_has_no_leading_term(self, airy_ms):
        hw1 = hat_w1_series_rf(airy_ms)
        assert not hw1.coefficient(-1)


class TestConnectedCorrelators:
    def test_symmetry(self, airy_ms):
        pts = [Fraction(2), Fraction(3), Fraction(5)]
        base = w_connected_series(airy_ms, pts)
        for perm in itertools.permutations(pts):
            other = w_connected_series(airy_ms, list(perm))
            for k in range(base.low, base.K + 1):
                assert base.coefficient(k) == other.coefficient(k)

    def test_two_point_leading_is_bergman(self, airy_ms):
        curve = airy_ms.curve
        z1, z2 = Fraction(2), Fraction(5)
        v = w_connected_series(airy_ms, [z1, z2]).coefficient(0)
        assert v * curve.xprime(z1) * curve.xprime(z2) == Fraction(1) / (z1 - z2) ** 2

    def test_clash_regularization(self, airy_ms):
        # same x, different sheets: finite value
        v = w_connected_series(airy_ms, [Fraction(2), Fraction(-2)])
        assert v.coefficient(0) is not None

    def test_nonconnected_moment_relation(self, airy_ms):
        # W-hat_2 = hatW1(z1) hatW1(z2) + hatW2 at a sample pair
        z1, z2 = Fraction(2), Fraction(3)
        lhs = w_nonconnected(airy_ms, [z1, z2], hat=True)
        hw1 = hat_w1_series_rf(airy_ms)
        rhs = hw1.map(lambda f: f(z1)) * hw1.map(lambda f: f(z2)) + w_connected_series(
            airy_ms, [z1, z2]
        )
        for k in range(max(lhs.low, rhs.low), min(lhs.K, rhs.K) + 1):
            assert lhs.coefficient(k) == rhs.coefficient(k)

    def test_correlator_value_wire_format(self, airy_ms):
        val = w_connected(airy_ms, [Fraction(2), Fraction(3)], 0)
        data = val.to_json()
        assert data["n"] == 2 and data["k"] == 0
        assert Fraction(data["value"]) == val.value

    def test_truncation_error(self, airy_ms):
        with pytest.raises(CorrelatorError):
            w_connected(airy_ms, [Fraction(2)], airy_ms.K + 5)


class TestParityAndLeading:
    def test_parity_samples(self, airy_ms, mm_ms):
        for ms in (airy_ms, mm_ms):
            for n, pts in ((1, [Fraction(2)]), (2, [Fraction(2), Fraction(3)]),
                           (3, [Fraction(2), Fraction(3), Fraction(5)])):
                series = w_connected_series(ms, pts)
                for k in range(series.low, series.K + 1):
                    if (n + k) % 2:
                        assert not series.coefficient(k), (n, k)

    def test_three_point_leading_vanishes(self, airy_ms):
        series = w_connected_series(airy_ms, [Fraction(2), Fraction(3), Fraction(5)])
        assert not series.coefficient(0)


class TestLoopEquationFixtures:
    def test_det_expansion_matches_oracle(self, airy_pre, airy_ms):
        from ttrec.correlators import p_coefficients_at

        fix = load_fixture("airy_loop_det.json")
        curve = airy_pre.lax.curve
        for case in fix["expected"]["cases"]:
            x0, y0 = Fraction(case["x"]), Fraction(case["y"])
            pins = [Fraction(p) for p in case["pins"]]
            fiber = curve.fiber(x0)
            coeffs, _ys = p_coefficients_at(airy_ms, fiber, pins, 4)
            got = [Fraction(0)] * 5
            yp = Fraction(1)
            for c in range(len(coeffs)):
                for k in range(5):
                    got[k] += coeffs[c].coefficient(k) * yp
                yp *= y0
            expected = [Fraction(v) for v in case["orders"]]
            assert got == expected, case

    def test_loop_eq_check_n0(self, airy_ms, airy_pre):
        run = loop_eq_check(airy_pre.lax, ms=airy_ms, n=0, k_max=3)
        assert run["status"] == "pass"


class TestTau:
    def test_painleve6_leading_matches_residue_oracle(self, p6_pre):
        fix = load_fixture("tau_leading.json")
        series = tau_t_derivative(p6_pre.lax, K=1)
        assert series.coefficient(-1) == Fraction(fix["expected"]["painleve6"])

    def test_minimal_model_series(self, mm_pre, mm_ms):
        fix = load_fixture("tau_leading.json")
        series = tau_t_derivative(mm_pre.lax, ms=mm_ms)
        assert series.coefficient(-1) == Fraction(fix["expected"]["minimal_model_3_2"])
        got = [series.coefficient(k) for k in range(-1, 4)]
        assert got == [0, 0, Fraction(1, 144), 0, Fraction(7, 62208)]

    def test_requires_auxiliary_data(self, airy_pre):
        with pytest.raises(CorrelatorError):
            tau_t_derivative(airy_pre.lax)
