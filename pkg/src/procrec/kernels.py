"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Set ``PROCREC_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("PROCREC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

jacobi_eigh = _impl.jacobi_eigh
squared_distances = _impl.squared_distances

__all__ = ["BACKEND", "jacobi_eigh", "squared_distances"]
