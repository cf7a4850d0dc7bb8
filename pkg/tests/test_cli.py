import json
import os

import pytest

from ttrec.cli import main

from conftest import PRESET_DIR

AIRY = os.path.join(PRESET_DIR, "airy.json")
BAD = os.path.join(PRESET_DIR, "bad_auxiliary.json")


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    rc = main(args + ["--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return rc, data


class TestExitCodes:
    def test_certify_pass_is_zero(self, tmp_path):
        rc, data = run(["lax", "certify", AIRY, "--chi-max", "1"], tmp_path)
        assert rc == 0
        assert data["status"] == "pass"

    def test_certify_fail_is_one(self, tmp_path):
        rc, data = run(["lax", "certify", BAD], tmp_path)
        assert rc == 1
        assert data["status"] == "fail"

    def test_missing_file_is_two(self, tmp_path, capsys):
        rc = main(["lax", "certify", str(tmp_path / "nope.json")])
        assert rc == 2
        assert "cannot read" in capsys.readouterr().err

    def test_invalid_json_is_two(self, tmp_path, capsys):
        bad = tmp_path / "broken.json"
        bad.write_text("{not json")
        rc = main(["lax", "certify", str(bad)])
        assert rc == 2
        assert "invalid JSON" in capsys.readouterr().err

    def test_bad_flags_are_two(self, capsys):
        rc = main(["lax", "certify", AIRY, "--k-order", "0"])
        assert rc == 2


class TestReports:
    def test_curve_inspect(self, tmp_path):
        rc, data = run(["curve", "inspect", AIRY], tmp_path)
        assert rc == 0
        assert data["C"] == [[["0"], ["1"]], [["1"], ["0"]]] or data["C"]
        assert {b["location"] for b in data["branchpoints"]} == {"0", "inf"}
        assert data["input_sha256"] and len(data["input_sha256"]) == 64

    def test_tr_compute_table(self, tmp_path):
        rc, data = run(["tr", "compute", AIRY, "--chi-max", "1"], tmp_path)
        assert rc == 0
        assert set(data["table"]) == {"(0,3)", "(1,1)"}

    def test_correlate_entries(self, tmp_path):
        rc, data = run(["correlate", AIRY, "--k-order", "3"], tmp_path)
        assert rc == 0
        assert all({"n", "k", "points", "value"} <= set(e) for e in data["correlators"])

    def test_compare_identification(self, tmp_path):
        rc, data = run(["compare", AIRY, "--chi-max", "1"], tmp_path)
        assert rc == 0
        assert all(e["status"] == "pass" for e in data["identification"].values())

    def test_determinism(self, tmp_path):
        _rc, a = run(["curve", "inspect", AIRY], tmp_path, "a.json")
        _rc, b = run(["curve", "inspect", AIRY], tmp_path, "b.json")
        assert a == b

    def test_text_format(self, tmp_path):
        out = tmp_path / "report.txt"
        rc = main(["curve", "inspect", AIRY, "--format", "text", "--out", str(out)])
        assert rc == 0
        assert "status: pass" in out.read_text()

    def test_tau_painleve6(self, tmp_path):
        from conftest import load_fixture

        p6 = os.path.join(PRESET_DIR, "painleve6.json")
        rc, data = run(["tau", p6, "--k-order", "1"], tmp_path)
        assert rc == 0
        series = data["tau_t_derivative"]
        assert series["lowest"] == -1
        fix = load_fixture("tau_leading.json")
        assert series["coeffs"][0] == fix["expected"]["painleve6"]

    def test_tau_without_auxiliary_is_two(self, tmp_path, capsys):
        rc = main(["tau", AIRY])
        assert rc == 2
