"""Compiled-kernel backend selection.

The hot inner loops (root iteration, Horner grids, series recurrences)
have two interchangeable implementations: numba-jitted and pure numpy.
Set ``HBSPACE_BACKEND=numpy`` to force the fallback; anything else uses
numba when it imports cleanly.
"""

import os

_requested = os.environ.get("HBSPACE_BACKEND", "").strip().lower()

USE_NUMBA = _requested != "numpy"
if USE_NUMBA:
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover - depends on environment
        USE_NUMBA = False


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
