"""Numpy fallback for the subset-lattice transforms.

Same contracts as the compiled ``_subsetops`` extension; used automatically
when the extension is not built (or when INFOSEG_PURE_PYTHON is set).
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def _check(a: np.ndarray, m: int) -> None:
    if a.ndim != 1 or a.shape[0] != 1 << m:
        raise ValueError("array length must be 2**m")


def zeta_in_place(a: np.ndarray, m: int) -> None:
    """In place, a[X] <- sum of a[B] over all B subseteq X."""
    _check(a, m)
    for i in range(m):
        # axis layout (high bits, bit i, low bits): add the bit-i=0 slice
        # onto the bit-i=1 slice
        view = a.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]


def mobius_in_place(a: np.ndarray, m: int) -> None:
    """In place, inverse of :func:`zeta_in_place`."""
    _check(a, m)
    for i in range(m):
        view = a.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
