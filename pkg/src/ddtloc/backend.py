"""Kernel backend selection.

The compiled extension is preferred when importable; set DDTLOC_BACKEND to
``python`` or ``cython`` to force one (forcing an unavailable backend is an
import-time error).
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

_requested = os.environ.get("DDTLOC_BACKEND", "auto").lower()

if _requested in ("auto", ""):
    kernels = _kernels_c if _kernels_c is not None else _kernels_py
elif _requested == "cython":
    if _kernels_c is None:
        raise ImportError(
            "DDTLOC_BACKEND=cython but the compiled extension is not available"
        )
    kernels = _kernels_c
elif _requested == "python":
    kernels = _kernels_py
else:
    raise ImportError(f"unknown DDTLOC_BACKEND {_requested!r}")

BACKEND_NAME = "cython" if kernels is _kernels_c else "python"


def available_backends() -> dict[str, object]:
    """Name -> kernel module for every importable backend."""
    out = {"python": _kernels_py}
    if _kernels_c is not None:
        out["cython"] = _kernels_c
    return out
