"""Backend selection for the numeric kernels.

Set ``SPANSTRUCT_NO_NUMBA=1`` to force the pure-numpy path. numba is also
skipped silently when it cannot be imported.
"""
import os

_disabled = os.environ.get("SPANSTRUCT_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised by the env flag
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn


BACKEND = "numba" if HAVE_NUMBA else "numpy"
