"""Kernel selection: the compiled extension when present, else pure Python.

Set ``HOMRE_PURE=1`` to force the fallback.  ``BACKEND`` names the active one.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

SYM = _pykernels.SYM
SPLIT = _pykernels.SPLIT
EPS = _pykernels.EPS
MATCH = _pykernels.MATCH

_c = None
if not os.environ.get("HOMRE_PURE"):
    try:
        from . import _ckernels as _c  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _c = None

BACKEND = "cython" if _c is not None else "python"


def have_extension() -> bool:
    return _c is not None


def get(name: str, backend: str | None = None):
    """Look up kernel ``name`` for ``backend`` (``"cython"``, ``"python"`` or active)."""
    backend = backend or BACKEND
    if backend == "cython":
        if _c is None:
            raise RuntimeError("compiled kernels are not available")
        return getattr(_c, name)
    return getattr(_pykernels, name)


def as_i32(values) -> np.ndarray:
    return np.ascontiguousarray(values, dtype=np.int32)
