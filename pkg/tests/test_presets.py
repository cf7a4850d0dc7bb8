import filecmp
import json
import os
from fractions import Fraction

import pytest

from ttrec.laxpair import LaxPair
from ttrec.presets import (
    airy,
    all_presets,
    bad_auxiliary,
    bad_pole_dominance,
    double_point_demo,
    export_presets,
    minimal_model,
    painleve6,
)

from conftest import PRESET_DIR


class TestConstruction:
    def test_all_presets_named(self):
        names = {p.name for p in all_presets()}
        assert names == {"airy", "painleve6", "minimal_model_3_2"}

    def test_airy_shape(self, airy_pre):
        lp = airy_pre.lax
        assert (lp.d, lp.K) == (2, 4)
        assert lp.curve is not None and lp.curve.s is None

    def test_painleve6_rejects_bad_witness(self):
        from ttrec.laxpair import LaxError

        with pytest.raises(LaxError):
            painleve6(t=Fraction(1))  # collides with a pole
        with pytest.raises(LaxError):
            painleve6(a=Fraction(1, 2), b=Fraction(1, 3))  # irrational s

    def test_minimal_model_only_32(self):
        from ttrec.laxpair import LaxError

        with pytest.raises(LaxError):
            minimal_model(p=5, q=2)

    def test_double_point_demo_is_t27_instance(self, dp_pre):
        assert dp_pre.lax.params["t"] == 27
        assert dp_pre.golden["double_points"] == [(Fraction(-3), Fraction(3))]


class TestCommittedJson:
    def test_export_reproduces_committed_files(self, tmp_path):
        export_presets(str(tmp_path))
        committed = sorted(os.listdir(PRESET_DIR))
        fresh = sorted(os.listdir(tmp_path))
        assert committed == fresh
        for name in committed:
            assert filecmp.cmp(
                os.path.join(PRESET_DIR, name), tmp_path / name, shallow=False
            ), name

    def test_roundtrip_from_committed(self):
        for name in ("airy", "painleve6", "minimal_model_3_2", "double_point_demo"):
            with open(os.path.join(PRESET_DIR, f"{name}.json")) as fh:
                data = json.load(fh)
            lp = LaxPair.from_json(data)
            assert lp.to_json() == data, name

    def test_negative_presets_committed(self):
        for name in ("bad_auxiliary", "bad_pole_dominance"):
            path = os.path.join(PRESET_DIR, f"{name}.json")
            assert os.path.exists(path)
            with open(path) as fh:
                LaxPair.from_json(json.load(fh))


class TestGoldenBlobs:
    def test_negative_witnesses(self):
        assert bad_auxiliary().golden["witness"] == (Fraction(2), Fraction(-2))
        assert bad_pole_dominance().golden["witness"] == Fraction(4)

    def test_preset_determinism(self):
        a = airy().lax.to_json()
        b = airy().lax.to_json()
        assert a == b
        m1 = minimal_model().lax.to_json()
        m2 = minimal_model().lax.to_json()
        assert m1 == m2
