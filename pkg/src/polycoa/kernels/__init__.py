"""Numerical kernel backends.

The package's hot loops (the cyclic Jacobi eigensolver behind every fidelity
evaluation, and the ensemble-concurrence sum inside the decomposition search)
live behind this module. The compiled extension ``_core`` is selected at
import when available; the numpy reference implementation in ``pure`` is the
fallback. Set POLYCOA_PURE_KERNELS=1 to force the fallback. Both backends
expose the same functions and are held to agreement in tests/test_kernels.py.
"""
import os

from . import pure as _pure_impl

if os.environ.get("POLYCOA_PURE_KERNELS", "") not in ("", "0"):
    _impl = _pure_impl
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _pure_impl

BACKEND = _impl.BACKEND
jacobi_eigh = _impl.jacobi_eigh
concurrence_each = _impl.concurrence_each

__all__ = ["BACKEND", "jacobi_eigh", "concurrence_each"]
