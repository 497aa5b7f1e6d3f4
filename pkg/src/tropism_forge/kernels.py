"""Kernel selection: the compiled extension when available, else pure Python.

Set ``TROPISM_FORGE_PURE=1`` to force the Python fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("TROPISM_FORGE_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND: str = _impl.NAME


def dd_intersect(lin, rays, zs, ncons, constraints):
    if _impl is not _pykernels:
        try:
            return _impl.dd_intersect(lin, rays, zs, ncons, constraints)
        except OverflowError:
            pass
    return _pykernels.dd_intersect(lin, rays, zs, ncons, constraints)


def grid_search(m, nunknowns, equations, phi, limit=0, grid=0):
    if _impl is not _pykernels:
        try:
            return _impl.grid_search(m, nunknowns, equations, phi, limit, grid)
        except OverflowError:
            pass
    return _pykernels.grid_search(m, nunknowns, equations, phi, limit, grid)
