"""Hot loops: CSR mat-vec, repeated smoothing steps, Jacobi PCG, power iteration.

The compiled extension ``_ckernels`` is used when it has been built;
otherwise the numpy implementations in ``_pykernels`` are used.  Set
``EDGEFLOW_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels as python

if os.environ.get("EDGEFLOW_PURE_PYTHON", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

active = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

csr_matvec = active.csr_matvec
smooth = active.smooth
pcg = active.pcg
power_iteration = active.power_iteration

__all__ = ["BACKEND", "compiled", "python", "csr_matvec", "smooth", "pcg", "power_iteration"]
