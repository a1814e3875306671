"""Numba dispatch shim.

Hot kernels are written once in nopython-compatible style and decorated with
:func:`maybe_njit`.  By default they compile with numba; setting the
environment variable ``KNOTTAB_PURE=1`` (or running without numba installed)
selects the plain-Python fallback path.  ``benchmarks/bench_kernels.py``
times both paths.
"""

import os

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
    _njit = None

PURE_PYTHON = _njit is None or os.environ.get("KNOTTAB_PURE", "") not in ("", "0")


def maybe_njit(**kwargs):
    """Return numba's njit decorator, or identity on the fallback path."""
    if PURE_PYTHON:
        return lambda func: func
    return _njit(**kwargs)


def py_func(kernel):
    """Undecorated Python function behind a kernel (itself when pure)."""
    return getattr(kernel, "py_func", kernel)
