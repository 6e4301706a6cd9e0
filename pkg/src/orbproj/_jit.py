"""Numba switch.

Set ``ORBPROJ_DISABLE_NUMBA=1`` to force the pure-numpy kernels, e.g. for
debugging inside the interpreter or on platforms without numba.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None

DISABLED = os.environ.get("ORBPROJ_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")
HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED


def njit(func=None, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise."""
    if not HAVE_NUMBA:
        if func is not None:
            return func
        return lambda f: f
    opts = {"cache": True, "nogil": True}
    opts.update(kwargs)
    if func is not None:
        return numba.njit(**opts)(func)
    return numba.njit(**opts)
