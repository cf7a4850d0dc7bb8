"""Generate all golden fixture files.

Usage: ttrec-oracle --presets <dir> --out <dir>

Every fixture is written canonically (sorted keys, indent 1, trailing
newline) so rerunning the generator reproduces the files byte for byte
under the recorded CAS version.
"""

import argparse
import os

import sympy as sp

from .eigen_m import m_series
from .eo_residues import EORecursion
from .io import Z, load_instance, matrix_to_json, provenance, rat_to_json, rf_to_json, write_fixture
from .loop_det import det_expansion
from .path_integrals import exponent_integrals
from .tau_residue import leading_tau_coefficient

TR_CASES = {
    (0, 3): {"pins": ["2", "3"], "samples": [["1", "2", "3"], ["2", "3", "5"], ["7", "-2", "3"]]},
    (1, 1): {"pins": [], "samples": [["1"], ["2"], ["-3"]]},
    (0, 4): {"pins": ["2", "3", "5"], "samples": [["1", "2", "3", "4"], ["2", "3", "5", "7"], ["1", "-2", "3", "-4"]]},
    (1, 2): {"pins": ["2"], "samples": [["1", "2"], ["2", "5"], ["-3", "7"]]},
}

DET_TUPLES = [
    ("1", "5/2", []),
    ("4", "-7/3", []),
    ("1", "5/2", ["3"]),
    ("4", "-7/3", ["5"]),
    ("9", "1/3", ["-5/2"]),
]


def gen_m_fixtures(presets, out):
    d, K, L, R, curve = load_instance(os.path.join(presets, "airy.json"))
    Ms = m_series(L, curve, 2)
    write_fixture(os.path.join(out, "airy_m_series.json"), {
        "id": "airy-m-eigenbasis",
        "description": "Projector series orders 1 and 2 on the square-root "
                       "instance, from the eigenbasis recursion.",
        "inputs": {"instance": "presets/airy.json", "K": 2},
        "expected": {"M1": matrix_to_json(Ms[1]), "M2": matrix_to_json(Ms[2])},
        "provenance": provenance("ttrec_oracle.eigen_m"),
    })


def gen_tr_fixtures(presets, out):
    _d, _K, _L, _R, curve = load_instance(os.path.join(presets, "airy.json"))
    eo = EORecursion(curve)
    expected = {}
    for (g, n), case in sorted(TR_CASES.items()):
        val, slots = eo.omega(g, n)
        pinned = val.subs(
            list(zip(slots[1:], [sp.Rational(p) for p in case["pins"]])),
            simultaneous=True,
        )
        samples = []
        for pts in case["samples"]:
            sval = val.subs(list(zip(slots, [sp.Rational(p) for p in pts])), simultaneous=True)
            samples.append({"points": pts, "value": rat_to_json(sval)})
        expected[f"({g},{n})"] = {
            "pins": case["pins"],
            "rf_z1": rf_to_json(sp.cancel(pinned), slots[0]),
            "samples": samples,
        }
    write_fixture(os.path.join(out, "airy_tr.json"), {
        "id": "airy-tr-residues",
        "description": "Recursion invariants (0,3),(1,1),(0,4),(1,2) on the "
                       "square-root curve by direct residue evaluation; "
                       "closed form in the first slot with the others pinned.",
        "inputs": {"instance": "presets/airy.json"},
        "expected": expected,
        "provenance": provenance("ttrec_oracle.eo_residues"),
    })


def gen_det_fixtures(presets, out):
    d, K, L, R, curve = load_instance(os.path.join(presets, "airy.json"))
    cases = []
    for x0, y0, pins in DET_TUPLES:
        vals = det_expansion(
            L, curve, sp.Rational(x0), sp.Rational(y0), [sp.Rational(p) for p in pins], 4
        )
        cases.append({
            "x": x0, "y": y0, "pins": pins,
            "orders": [rat_to_json(v) for v in vals],
        })
    write_fixture(os.path.join(out, "airy_loop_det.json"), {
        "id": "airy-loop-determinant",
        "description": "hbar expansion of the eps-linear coefficient of the "
                       "pinned characteristic determinant at five samples.",
        "inputs": {"instance": "presets/airy.json", "K": 4},
        "expected": {"cases": cases},
        "provenance": provenance("ttrec_oracle.loop_det"),
    })


def gen_wkb_fixtures(presets, out):
    d, K, L, R, curve = load_instance(os.path.join(presets, "airy.json"))
    vals, forms = exponent_integrals(L, curve, 1, 2, 4, digits=60)
    write_fixture(os.path.join(out, "airy_wkb.json"), {
        "id": "airy-wkb-exponents",
        "description": "Exact path integrals of the exponent integrands of "
                       "the first fundamental-solution column along z: 1 -> 2.",
        "inputs": {"instance": "presets/airy.json", "path": ["1", "2"], "K": 4, "digits": 60},
        "expected": {"exponents": vals, "closed_forms": forms},
        "provenance": provenance("ttrec_oracle.path_integrals"),
    })


def gen_tau_fixtures(presets, out):
    expected = {}
    for name in ("painleve6", "minimal_model_3_2"):
        _d, _K, _L, _R, curve = load_instance(os.path.join(presets, f"{name}.json"))
        expected[name] = rat_to_json(leading_tau_coefficient(curve))
    write_fixture(os.path.join(out, "tau_leading.json"), {
        "id": "tau-leading-residues",
        "description": "hbar^-1 coefficient of the time derivative of log tau "
                       "as a residue sum over the poles of x and s.",
        "inputs": {"instances": ["presets/painleve6.json", "presets/minimal_model_3_2.json"]},
        "expected": expected,
        "provenance": provenance("ttrec_oracle.tau_residue"),
    })


GENERATORS = [gen_m_fixtures, gen_tr_fixtures, gen_det_fixtures, gen_wkb_fixtures, gen_tau_fixtures]


def main(argv=None):
    ap = argparse.ArgumentParser(prog="ttrec-oracle", description=__doc__)
    ap.add_argument("--presets", default="presets")
    ap.add_argument("--out", default="fixtures")
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    for gen in GENERATORS:
        gen(args.presets, args.out)
        print(f"{gen.__name__}: done")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
