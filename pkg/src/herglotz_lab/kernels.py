"""Kernel dispatch: compiled extension when available, numpy otherwise.

Set ``HERGLOTZ_LAB_PURE=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
atom_sum = _kernels_py.atom_sum

if os.environ.get("HERGLOTZ_LAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels  # type: ignore[attr-defined]

        atom_sum = _kernels.atom_sum
        BACKEND = "cython"
    except ImportError:
        pass
