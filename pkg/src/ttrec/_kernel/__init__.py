"""Kernel backend selection.

Imports the compiled polynomial kernel when it was built, otherwise the
pure Python twin.  TTREC_PURE_PYTHON=1 forces the fallback (used by the
benchmark and for debugging).
"""

import os

if os.environ.get("TTREC_PURE_PYTHON") == "1":
    from . import _poly_py as kernel
else:
    try:
        from . import _poly_core as kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _poly_py as kernel

BACKEND = kernel.BACKEND
poly_trim = kernel.poly_trim
poly_add = kernel.poly_add
poly_mul = kernel.poly_mul
poly_divmod = kernel.poly_divmod
poly_eval = kernel.poly_eval
