"""Backend selection for the subset-lattice kernels.

Prefers the compiled extension, falls back to the numpy implementation.
Set INFOSEG_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("INFOSEG_PURE_PYTHON"):
    from infoseg import _subsetops_py as _impl
else:
    try:
        from infoseg import _subsetops as _impl  # type: ignore[attr-defined]
    except ImportError:
        from infoseg import _subsetops_py as _impl

BACKEND: str = _impl.BACKEND
zeta_in_place = _impl.zeta_in_place
mobius_in_place = _impl.mobius_in_place
