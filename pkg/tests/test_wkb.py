from fractions import Fraction

import mpmath as mp
import pytest

from ttrec.correlators import recover_psi

from conftest import load_fixture


class TestExponentIntegrals:
    def test_match_symbolic_oracle(self, airy_ms):
        fix = load_fixture("airy_wkb.json")
        path = [Fraction(p) for p in fix["inputs"]["path"]]
        with mp.workdps(60):
            sample = recover_psi(airy_ms, path, precision=60)
            for k, expected in enumerate(fix["expected"]["exponents"]):
                dev = abs(sample["exponents"][k] - mp.mpf(expected))
                assert dev < mp.mpf(10) ** (-50), (k, dev)

    def test_closed_forms_recorded(self):
        fix = load_fixture("airy_wkb.json")
        forms = fix["expected"]["closed_forms"]
        assert forms[0] == "14/3"
        assert forms[1] == "-log(2)/2"

    def test_column_normalization(self, airy_ms):
        # first sheet, first entry carries coefficient ~ M^(0)_{11}-derived
        with mp.workdps(30):
            sample = recover_psi(airy_ms, [Fraction(1), Fraction(2)], precision=30)
        assert len(sample["column"]) == airy_ms.d
        # leading coefficients are finite and nonzero
        for col in sample["column"]:
            assert col[0] != 0


class TestOdeDefect:
    def test_column_ode_identity_exact(self, airy_ms):
        # order-k residual of hbar d/dx M[:,1] + M[:,1] g - (L M)[:,1]
        # vanishes identically in z (the backbone of the numeric recovery)
        from ttrec.correlators import _exponent_integrands, _hb_div, _l_series_z

        ms = airy_ms
        lser = _l_series_z(ms)
        mser = ms.series()
        prod = lser * mser
        num = (mser * lser).map(lambda m: m[0, 0])
        den = mser.map(lambda m: m[0, 0])
        g = _hb_div(num, den, ms.K - 1)
        inv_xp = None
        curve = ms.curve
        for k in range(0, ms.K - 1):
            resid = None
            for i in range(ms.d):
                col = mser.map(lambda m, i=i: m[i, 0])
                dcol_prev = (
                    col.coefficient(k - 1).derivative() / curve.xprime
                    if k >= 1
                    else None
                )
                acc = dcol_prev if dcol_prev is not None else None
                term = sum(
                    (
                        col.coefficient(l) * g.coefficient(k - l)
                        for l in range(0, k + 1)
                    ),
                    start=col.coefficient(0) * 0,
                )
                lm = prod.map(lambda m, i=i: m[i, 0]).coefficient(k)
                total = term - lm
                if acc is not None:
                    total = total + acc
                assert not total, (i, k)
