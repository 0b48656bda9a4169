"""Optional numba acceleration.

Hot kernels are written once as plain Python loops and compiled with
``numba.njit`` when numba is importable and ``QLS_NUMBA`` is not set to a
false value. Each kernel module also carries a vectorized numpy
implementation; :func:`use_numba` decides which one is dispatched.

Environment
-----------
QLS_NUMBA
    ``0``/``false``/``off`` forces the numpy path.
QLS_THREADS
    Caps worker threads for parallel sweeps (and numba's thread pool).
"""
from __future__ import annotations

import os

_FALSE = {"0", "false", "off", "no"}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False


def use_numba() -> bool:
    """True when the numba kernels should be dispatched."""
    if not HAVE_NUMBA:
        return False
    return os.environ.get("QLS_NUMBA", "1").strip().lower() not in _FALSE


def max_threads() -> int:
    raw = os.environ.get("QLS_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"QLS_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    kwargs.setdefault("cache", True)
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn
