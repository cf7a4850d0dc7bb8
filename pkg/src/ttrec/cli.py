"""Batch front-end: load instances, run pipelines, emit reports.

Every command reads a Lax-pair JSON file (see laxpair.LaxPair.to_json),
runs one pipeline, and writes a JSON or text report.  Reports embed the
tool version, the effective configuration, and a content hash of the
input so certified claims stay auditable.  Exit codes: 0 every check
passed, 1 a mathematical check failed, 2 operational error (bad input,
missing data, unsupported instance).
"""

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction

import mpmath as _mp

from . import __version__
from .algebra import AlgebraError, rat
from .curve import CurveError
from .laxpair import LaxError, LaxPair, certify
from .serialize import hbar_to_json, matrix_to_json, rat_to_json, rf_to_json
from .toprec import TopologicalRecursion, stable_pairs

__all__ = ["main"]


class CliError(Exception):
    """Operational failure: exits with code 2."""


def _load_lax(path):
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    try:
        lp = LaxPair.from_json(data)
    except (LaxError, KeyError, ValueError) as exc:
        raise CliError(f"{path}: not a Lax-pair file: {exc}") from exc
    digest = hashlib.sha256(raw.encode()).hexdigest()
    return lp, digest


def _meta(args, digest):
    return {
        "version": __version__,
        "input": args.path,
        "input_sha256": digest,
        "config": {
            "k_order": args.k_order,
            "chi_max": args.chi_max,
            "precision": args.precision,
            "seed": args.seed,
        },
    }


def _emit(args, report):
    if args.format == "json":
        text = json.dumps(report, indent=1, sort_keys=True, default=str) + "\n"
    else:
        text = _as_text(report) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _as_text(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_as_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_as_text(e, indent) for e in obj)
    return f"{pad}{obj}"


def _status_exit(status):
    return 0 if status == "pass" else 1


def _require_curve(lp):
    if lp.curve is None:
        raise CliError("instance carries no parametrization")
    return lp.curve


# ---------------------------------------------------------------------------
# commands


def cmd_curve_inspect(args):
    lp, digest = _load_lax(args.path)
    curve = _require_curve(lp)
    pd = curve.pole_data
    report = _meta(args, digest)
    report["poles"] = {
        "constant_term": rat_to_json(pd.X_inf0),
        "locations": [
            {
                "alpha": rat_to_json(p.location),
                "order": p.order,
                "X": [rat_to_json(c) for c in p.X],
            }
            for p in pd.poles
        ],
    }
    report["branchpoints"] = [
        {"location": "inf" if bp.location is None or str(bp.location) == "INF" else str(bp.location),
         "kind": bp.kind, "order": bp.order, "regular": bp.regular}
        for bp in curve.branchpoints
    ]
    report["double_points"] = [
        {"b": str(dp.b), "b_bar": str(dp.b_bar)} for dp in curve.double_points_xy
    ]
    report["C"] = matrix_to_json(curve.C, entry=rat_to_json)
    report["status"] = "pass"
    _emit(args, report)
    return 0


def cmd_lax_certify(args):
    from .correlators import m_series, tt_check

    lp, digest = _load_lax(args.path)
    _require_curve(lp)
    report = _meta(args, digest)
    assum, artifacts = certify(lp)
    report["assumptions"] = assum.to_json()
    status = "pass" if assum.passed else "fail"
    if assum.passed:
        ms = m_series(lp, K=min(args.k_order, lp.K))
        tt = tt_check(lp, lp.curve, ms=ms, chi_max=args.chi_max, seed=args.seed)
        report["tt"] = tt.to_json()
        status = tt.status
    report["status"] = status
    _emit(args, report)
    return _status_exit(status)


def cmd_tr_compute(args):
    lp, digest = _load_lax(args.path)
    curve = _require_curve(lp)
    tr = TopologicalRecursion(curve)
    report = _meta(args, digest)
    table = {}
    pin_pool = [Fraction(p) for p in (2, 3, 5, 7)]
    for g, n in stable_pairs(args.chi_max):
        pins = pin_pool[: n - 1]
        diff = tr.compute(g, n, pins)
        grid_pts = [Fraction(p) for p in (11, 13, 17, 19, 23)]
        table[f"({g},{n})"] = {
            "pins": [rat_to_json(p) for p in pins],
            "rf_z1": rf_to_json(diff.rf),
            "grid": [[rat_to_json(z), rat_to_json(v)] for z, v in diff.grid(grid_pts)],
        }
    report["table"] = table
    report["status"] = "pass"
    _emit(args, report)
    return 0


def cmd_correlate(args):
    from .correlators import m_series, w_connected

    lp, digest = _load_lax(args.path)
    curve = _require_curve(lp)
    ms = m_series(lp, K=min(args.k_order, lp.K))
    report = _meta(args, digest)
    pts_pool = [Fraction(p) for p in (2, 3, 5, 7)]
    entries = []
    for n in (1, 2, 3):
        pts = pts_pool[:n]
        k_hi = ms.K - 1 if n == 1 else ms.K - n + 1
        for k in range(-1 if n == 1 else 0, k_hi + 1):
            try:
                val = w_connected(ms, pts, k)
            except (LaxError, AlgebraError, CurveError) as exc:
                raise CliError(f"correlator evaluation failed: {exc}") from exc
            entries.append(val.to_json())
    report["correlators"] = entries
    report["status"] = "pass"
    _emit(args, report)
    return 0


def cmd_compare(args):
    from .correlators import _identification, m_series

    lp, digest = _load_lax(args.path)
    curve = _require_curve(lp)
    ms = m_series(lp, K=min(args.k_order, lp.K))
    tr = TopologicalRecursion(curve)
    report = _meta(args, digest)
    ident = _identification(ms, tr, args.chi_max, args.seed)
    report["identification"] = ident
    status = (
        "pass"
        if all(e.get("status") == "pass" for e in ident.values())
        else "fail"
    )
    report["status"] = status
    _emit(args, report)
    return _status_exit(status)


def cmd_tau(args):
    from .correlators import CorrelatorError, m_series, tau_t_derivative

    lp, digest = _load_lax(args.path)
    _require_curve(lp)
    report = _meta(args, digest)
    try:
        series = tau_t_derivative(lp, K=min(args.k_order, lp.K))
    except CorrelatorError as exc:
        raise CliError(str(exc)) from exc
    report["tau_t_derivative"] = hbar_to_json(series, rat_to_json)
    report["status"] = "pass"
    _emit(args, report)
    return 0


def cmd_wkb(args):
    from .correlators import CorrelatorError, conjecture_check, m_series, recover_psi

    lp, digest = _load_lax(args.path)
    _require_curve(lp)
    ms = m_series(lp, K=min(args.k_order, lp.K))
    report = _meta(args, digest)
    try:
        with _mp.workdps(args.precision):
            sample = recover_psi(ms, [Fraction(1), Fraction(2)], precision=args.precision)
            report["psi_sample"] = {
                "end": _mp.nstr(sample["end"], args.precision),
                "exponents": [
                    _mp.nstr(s, args.precision) for s in sample["exponents"]
                ],
                "column": [
                    [_mp.nstr(c, args.precision) for c in col]
                    for col in sample["column"]
                ],
            }
            check = conjecture_check(ms, precision=args.precision)
    except CorrelatorError as exc:
        raise CliError(str(exc)) from exc
    report["conjecture"] = {
        "status": check["status"],
        "precision": check["precision"],
        "samples": [
            {
                "pair": [rat_to_json(a) for a in s["pair"]],
                "status": s["status"],
                "exponent_deviation": _mp.nstr(s["exponent_deviation"], 8),
                "order_deviations": [
                    _mp.nstr(v, 8) for v in s["order_deviations"]
                ],
            }
            for s in check["samples"]
        ],
    }
    report["status"] = check["status"]
    _emit(args, report)
    return _status_exit(check["status"])


# ---------------------------------------------------------------------------
# argument plumbing


def _build_parser():
    ap = argparse.ArgumentParser(prog="ttrec", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, subname=None):
        p = sub.add_parser(name)
        if subname:
            p.add_argument("subcommand", choices=[subname])
        p.add_argument("path")
        p.add_argument("--k-order", type=int, default=4, dest="k_order")
        p.add_argument("--chi-max", type=int, default=2, dest="chi_max")
        p.add_argument(
            "--precision",
            type=int,
            default=int(os.environ.get("TTREC_PRECISION", "50")),
        )
        p.add_argument("--seed", type=int, default=12345)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.set_defaults(fn=fn)
        return p

    # two-word commands take the verb as a fixed positional
    add("curve", cmd_curve_inspect, subname="inspect")
    add("lax", cmd_lax_certify, subname="certify")
    add("tr", cmd_tr_compute, subname="compute")
    add("correlate", cmd_correlate)
    add("compare", cmd_compare)
    add("tau", cmd_tau)
    add("wkb", cmd_wkb)
    return ap


def main(argv=None):
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.k_order < 1 or args.chi_max < 1:
        sys.stderr.write("ttrec: --k-order and --chi-max must be >= 1\n")
        return 2
    try:
        return args.fn(args)
    except CliError as exc:
        sys.stderr.write(f"ttrec: {exc}\n")
        return 2
    except (LaxError, CurveError, AlgebraError) as exc:
        sys.stderr.write(f"ttrec: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
