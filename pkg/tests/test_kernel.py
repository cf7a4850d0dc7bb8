import os
import subprocess
import sys
from fractions import Fraction

from ttrec import KERNEL_BACKEND
from ttrec._kernel import _poly_py
from ttrec._kernel import kernel as active_kernel

SNIPPET = """
import json
from fractions import Fraction
from ttrec import KERNEL_BACKEND
from ttrec.presets import airy
from ttrec.correlators import m_series, w_connected_series
ms = m_series(airy(K=3).lax, K=3)
v = w_connected_series(ms, [Fraction(2), Fraction(3)]).coefficient(2)
print(json.dumps({"backend": KERNEL_BACKEND, "value": str(v)}))
"""


def _run(env_flag):
    env = dict(os.environ)
    if env_flag:
        env["TTREC_PURE_PYTHON"] = "1"
    else:
        env.pop("TTREC_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", SNIPPET], capture_output=True, text=True, env=env, check=True
    )
    import json

    return json.loads(out.stdout.strip().splitlines()[-1])


def test_both_backends_agree():
    compiled = _run(False)
    pure = _run(True)
    assert pure["backend"] == "python"
    assert compiled["value"] == pure["value"]


def test_kernels_match_on_direct_ops():
    a = [Fraction(1, 2), Fraction(0), Fraction(-3)]
    b = [Fraction(2), Fraction(5, 7)]
    assert active_kernel.poly_mul(list(a), list(b)) == _poly_py.poly_mul(list(a), list(b))
    assert active_kernel.poly_add(list(a), list(b)) == _poly_py.poly_add(list(a), list(b))
    qa, ra = active_kernel.poly_divmod(list(a), list(b))
    qb, rb = _poly_py.poly_divmod(list(a), list(b))
    assert (qa, ra) == (qb, rb)
    assert active_kernel.poly_eval(list(a), Fraction(3)) == _poly_py.poly_eval(list(a), Fraction(3))
