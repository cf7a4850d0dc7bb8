"""End-to-end acceptance: one test per certified claim, each with a hard
time budget and a single pass/fail summary line on stdout."""

import contextlib
import itertools
import os
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from conftest import FIXTURE_DIR, PRESET_DIR, REPO


@contextlib.contextmanager
def budget(name, seconds):
    t0 = time.time()
    failed = False
    try:
        yield
    except BaseException:
        failed = True
        raise
    finally:
        dt = time.time() - t0
        status = "FAIL" if failed or dt > seconds else "PASS"
        print(f"[acceptance] {name}: {status} ({dt:.2f}s / budget {seconds}s)")
    assert dt <= seconds, f"{name} exceeded its {seconds}s budget ({dt:.2f}s)"


class TestAcceptance:
    def test_01_golden_values(self, p6_pre, mm_pre):
        from ttrec.algebra import Matrix
        from ttrec.laxpair import solve_gamma, solve_v

        with budget("golden-values", 10):
            lp = p6_pre.lax
            b, a = lp.params["b"], lp.params["a"]
            theta_inf = lp.params["theta_inf"]
            gfac = (b - a) / 2
            assert lp.curve.C == Matrix([[-gfac, Fraction(0)], [Fraction(0), gfac]])
            v, a4 = solve_v(lp)
            assert a4.passed
            expected_v = Matrix(
                [[Fraction(0), 4 / (theta_inf * (b - a))], [Fraction(1), Fraction(0)]]
            )
            # v columns are eigenvector normalizations: fixed up to scale
            for j in range(2):
                ratios = set()
                for i in range(2):
                    assert bool(v.rows[i][j]) == bool(expected_v.rows[i][j])
                    if v.rows[i][j]:
                        ratios.add(v.rows[i][j] / expected_v.rows[i][j])
                assert len(ratios) == 1
            gamma, a6 = solve_gamma(lp, v, lp.curve.C)
            assert a6.passed
            g0 = gamma.coefficient(0)
            shape = Matrix(
                [
                    [-(theta_inf**2) * (b - a) ** 2 / 16, Fraction(0)],
                    [Fraction(0), Fraction(1)],
                ]
            )
            assert not g0[0, 1] and not g0[1, 0]
            assert g0[0, 0] / shape[0, 0] == g0[1, 1] / shape[1, 1]

            mlp = mm_pre.lax
            assert mlp.curve.C == Matrix([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]])
            mv, ma4 = solve_v(mlp)
            assert ma4.passed
            assert not mv[0, 1] and not mv[1, 0]  # identity up to column scale
            mg, ma6 = solve_gamma(mlp, mv, mlp.curve.C)
            assert ma6.passed
            mg0 = mg.coefficient(0)
            Cinv = mlp.curve.C.inverse()
            scale = mg0[0, 1] / Cinv[0, 1]
            for i in range(2):
                for j in range(2):
                    assert mg0[i, j] == scale * Cinv[i, j]

    def test_02_fiber_identity(self, airy_pre, p6_pre, mm_pre):
        from ttrec.curve import bilinear, fiber_vandermonde
        from ttrec.laxpair import rational_fiber_samples

        with budget("fiber-identity", 5):
            for pre in (airy_pre, p6_pre, mm_pre):
                curve = pre.lax.curve
                xp = curve.xprime
                Cinv = curve.C.inverse()
                for x0, _fiber in rational_fiber_samples(curve, 20):
                    vs = fiber_vandermonde(curve, x0)
                    d = len(vs)
                    for i in range(d):
                        for j in range(d):
                            assert bilinear(vs[i], curve.C, vs[j]).value(xp) == (
                                1 if i == j else 0
                            ), (pre.name, x0)
                    for k in range(d):
                        for l in range(d):
                            acc = sum(
                                (v.entries[k] * v.entries[l] / xp(v.z0) for v in vs),
                                Fraction(0),
                            )
                            assert acc == Cinv.rows[k][l], (pre.name, x0)

    def test_03_tt_condition_1(self, all_ms):
        from ttrec.correlators import _condition1

        with budget("tt-condition-1", 30):
            for name, ms in all_ms.items():
                out = _condition1(ms, 50, seed=0)
                assert out["status"] == "pass", (name, out["witnesses"])

    def test_04_one_point_order_zero_vanishes(self, all_ms):
        from ttrec.correlators import w1_series_rf

        with budget("one-point-order-zero", 30):
            for name, ms in all_ms.items():
                w1 = w1_series_rf(ms)
                order0 = w1.coefficient(0)
                assert not order0, name  # identically zero as a function
                count = 0
                z = Fraction(2)
                while count < 50:
                    try:
                        assert order0(z) == 0
                        count += 1
                    except Exception:
                        pass
                    z += Fraction(1, 3)

    def test_05_projector_and_flow_identities(self, airy_ms, p6_ms):
        with budget("projector-flow-identities", 120):
            assert airy_ms.K == 4 and p6_ms.K == 4
            assert airy_ms.verify()
            assert p6_ms.verify()

    def test_06_parity(self, all_ms):
        from ttrec.correlators import _condition4, w_connected_series

        with budget("parity", 120):
            for name, ms in all_ms.items():
                out = _condition4(ms, seed=0)
                assert out["status"] == "pass", (name, out["witnesses"])
                # explicit n <= 3, k <= 4 sweep at one extra tuple
                pts = [Fraction(5, 2), Fraction(7, 2), Fraction(9, 2)]
                for n in (1, 2, 3):
                    series = w_connected_series(ms, pts[:n])
                    for k in range(series.low, min(series.K, 4) + 1):
                        if (n + k) % 2:
                            assert not series.coefficient(k), (name, n, k)

    def test_07_leading_orders(self, all_ms):
        from ttrec.correlators import _condition5

        with budget("leading-orders", 120):
            for name, ms in all_ms.items():
                out = _condition5(ms, chi_max=2, seed=0)
                assert out["status"] == "pass", (name, out["witnesses"])

    def test_08_pole_property_at_double_points(self, dp_ms):
        from ttrec.correlators import _condition3

        with budget("double-point-pole-property", 60):
            out = _condition3(dp_ms, chi_max=2, seed=0)
            assert out["status"] == "pass", out["witnesses"]

    def test_09_identification(self, airy_ms):
        from ttrec.correlators import _identification
        from ttrec.toprec import TopologicalRecursion

        with budget("identification", 300):
            tr = TopologicalRecursion(airy_ms.curve)
            table = _identification(airy_ms, tr, chi_max=2, seed=0)
            assert set(table) == {"(0,3)", "(1,1)", "(0,4)", "(1,2)"}
            for key, entry in table.items():
                assert entry["status"] == "pass", (key, entry)

    def test_10_loop_equations(self, airy_pre, p6_pre, airy_ms, p6_ms):
        from ttrec.correlators import loop_eq_check

        with budget("loop-equations", 300):
            for pre, ms in ((airy_pre, airy_ms), (p6_pre, p6_ms)):
                for n in (0, 1, 2):
                    run = loop_eq_check(
                        pre.lax, ms=ms, n=n, k_max=3, det_samples=5, seed=n
                    )
                    assert run["status"] == "pass", (pre.name, n, run)

    def test_11_conjecture(self, airy_ms):
        import mpmath as mp

        from ttrec.correlators import conjecture_check

        with budget("wave-function-conjecture", 120):
            report = conjecture_check(airy_ms, precision=50)
            assert report["status"] == "pass"
            assert len(report["samples"]) == 5
            tol = mp.mpf(10) ** -20
            for sample in report["samples"]:
                assert sample["status"] == "pass"
                assert abs(sample["exponent_deviation"]) < tol
                for dev in sample["order_deviations"]:
                    assert abs(dev) < tol

    def test_12_negative_controls(self):
        from ttrec.laxpair import certify
        from ttrec.presets import bad_auxiliary, bad_pole_dominance

        with budget("negative-controls", 30):
            pre = bad_auxiliary()
            report, _ = certify(pre.lax)
            a3 = report.checks["A3"]
            assert a3.status == "fail"
            witness = tuple(sorted(pre.golden["witness"]))
            assert witness in {tuple(sorted(p)) for p in a3.details["double_points"]}

            pre2 = bad_pole_dominance()
            report2, _ = certify(pre2.lax)
            a5 = report2.checks["A5"]
            assert a5.status == "fail"
            polar = [k for k in a5.details if k.startswith("polar_")]
            assert polar, a5.details
            located = set()
            for k in polar:
                located |= {
                    p for p in a5.details[k] if isinstance(p, Fraction)
                }
            # the polar part sits on the fiber over the witness x = 4
            x = pre2.lax.curve.x
            assert located and all(x(z) == pre2.golden["witness"] for z in located)

    def test_13_secondary_oracle_regeneration(self, tmp_path):
        with budget("oracle-regeneration", 600):
            env = dict(os.environ)
            env["PYTHONPATH"] = os.path.join(REPO, "oracle", "src")
            out = tmp_path / "fixtures"
            subprocess.run(
                [
                    sys.executable,
                    "-m",
                    "ttrec_oracle.gen",
                    "--presets",
                    PRESET_DIR,
                    "--out",
                    str(out),
                ],
                check=True,
                env=env,
                cwd=REPO,
                capture_output=True,
            )
            committed = sorted(os.listdir(FIXTURE_DIR))
            fresh = sorted(os.listdir(out))
            assert committed == fresh
            for name in committed:
                with open(os.path.join(FIXTURE_DIR, name), "rb") as fh:
                    want = fh.read()
                with open(out / name, "rb") as fh:
                    got = fh.read()
                assert want == got, f"{name} not byte-identical"
