"""Compare the compiled polynomial kernel against the pure-Python twin.

Runs the four hot kernel operations on synthetic dense operands and one
end-to-end projector-series build, once per backend (the fallback is
forced with TTREC_PURE_PYTHON=1 in a subprocess), and prints a timing
table.

Usage: python benchmarks/poly_bench.py [--degree 120] [--repeat 40]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = """
import json, sys, time
from fractions import Fraction
from ttrec import KERNEL_BACKEND
from ttrec._kernel import poly_add, poly_divmod, poly_eval, poly_mul

degree, repeat = json.loads(sys.argv[1])
a = [Fraction(i * 7919 % 83, (i % 17) + 1) for i in range(degree + 1)]
b = [Fraction((i * 104729 + 3) % 97, (i % 13) + 2) for i in range(degree // 2 + 1)]

out = {"backend": KERNEL_BACKEND}
t0 = time.perf_counter()
for _ in range(repeat):
    c = poly_mul(list(a), list(b))
out["mul"] = time.perf_counter() - t0
t0 = time.perf_counter()
for _ in range(repeat):
    poly_divmod(list(c), list(b))
out["divmod"] = time.perf_counter() - t0
t0 = time.perf_counter()
for _ in range(repeat):
    poly_add(list(a), list(b))
out["add"] = time.perf_counter() - t0
t0 = time.perf_counter()
for _ in range(repeat):
    poly_eval(list(a), Fraction(3, 2))
out["eval"] = time.perf_counter() - t0

from ttrec.presets import airy
from ttrec.correlators import m_series, w_connected_series
t0 = time.perf_counter()
ms = m_series(airy(K=4).lax, K=4)
w_connected_series(ms, [Fraction(2), Fraction(3), Fraction(5)])
out["m_series_e2e"] = time.perf_counter() - t0
print(json.dumps(out))
"""


def run_backend(pure, degree, repeat):
    env = dict(os.environ)
    if pure:
        env["TTREC_PURE_PYTHON"] = "1"
    else:
        env.pop("TTREC_PURE_PYTHON", None)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps([degree, repeat])],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degree", type=int, default=120)
    ap.add_argument("--repeat", type=int, default=40)
    args = ap.parse_args()

    compiled = run_backend(False, args.degree, args.repeat)
    pure = run_backend(True, args.degree, args.repeat)
    ops = ["mul", "divmod", "add", "eval", "m_series_e2e"]
    print(f"degree={args.degree} repeat={args.repeat}")
    print(f"{'op':<14}{compiled['backend']:>12}{pure['backend']:>12}{'speedup':>10}")
    for op in ops:
        tc, tp = compiled[op], pure[op]
        ratio = tp / tc if tc else float("inf")
        print(f"{op:<14}{tc:>11.4f}s{tp:>11.4f}s{ratio:>9.2f}x")


if __name__ == "__main__":
    main()
