"""Kernel dispatch: compiled ``_core`` when importable, else ``_pykernels``.

Set ``MODVERTEX_PURE=1`` to force the pure-Python kernels.
"""
import os

from modvertex import _pykernels as pure

BACKEND = "python"
if os.environ.get("MODVERTEX_PURE", "") not in ("1", "true", "yes"):
    try:
        from modvertex import _core as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = pure
else:
    _impl = pure

binom_mod = _impl.binom_mod
rref_mod = _impl.rref_mod
nullspace_mod = _impl.nullspace_mod
rank_mod = _impl.rank_mod
series_mul2d = _impl.series_mul2d

__all__ = ["BACKEND", "binom_mod", "rref_mod", "nullspace_mod", "rank_mod", "series_mul2d", "pure"]
