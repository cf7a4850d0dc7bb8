import json
import os
from fractions import Fraction

import pytest

from conftest import FIXTURE_DIR, load_fixture

ALL_FIXTURES = [
    "airy_m_series.json",
    "airy_tr.json",
    "airy_loop_det.json",
    "airy_wkb.json",
    "tau_leading.json",
]


class TestSchema:
    @pytest.mark.parametrize("name", ALL_FIXTURES)
    def test_required_keys(self, name):
        fix = load_fixture(name)
        assert {"id", "description", "inputs", "expected", "provenance"} <= set(fix)
        prov = fix["provenance"]
        assert prov["cas"] == "sympy" and prov["cas_version"]
        assert prov["script"].startswith("ttrec_oracle.")

    @pytest.mark.parametrize("name", ALL_FIXTURES)
    def test_canonical_encoding(self, name):
        path = os.path.join(FIXTURE_DIR, name)
        with open(path) as fh:
            raw = fh.read()
        data = json.loads(raw)
        assert raw == json.dumps(data, indent=1, sort_keys=True) + "\n"

    def test_rationals_parse(self):
        fix = load_fixture("airy_tr.json")
        for case in fix["expected"].values():
            for sample in case["samples"]:
                Fraction(sample["value"])  # must not raise

    def test_wkb_values_are_decimals(self):
        fix = load_fixture("airy_wkb.json")
        import decimal

        for v in fix["expected"]["exponents"]:
            decimal.Decimal(v)  # must not raise
