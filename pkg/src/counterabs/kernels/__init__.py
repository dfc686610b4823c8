"""Hot grid kernels: a compiled core with a numpy fallback chosen at import.

Set ``COUNTERABS_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os

BACKEND = "python"
if os.environ.get("COUNTERABS_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._ckernels import compositions, dnf_mask

        BACKEND = "cython"
    except ImportError:
        pass
if BACKEND == "python":
    from ._pykernels import compositions, dnf_mask

from . import _pykernels as pure

__all__ = ["BACKEND", "compositions", "dnf_mask", "pure"]
