"""Backend selection for the mod-p dense kernels.

The compiled extension is preferred when it imports; the pure-Python module
is the fallback.  Set DIAGALG_PURE=1 to force the fallback (used by the
benchmark and by tests that compare the two implementations).
"""

import os

if os.environ.get("DIAGALG_PURE") == "1":
    from . import _modp_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _modp as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _modp_py as _impl

        BACKEND = "python"

mat_mul_mod = _impl.mat_mul_mod
mat_rref_mod = _impl.mat_rref_mod


def backend_name():
    return BACKEND
