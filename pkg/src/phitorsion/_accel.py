"""Backend selection for the numeric kernels.

``PHITORSION_BACKEND=numpy`` forces the vectorised numpy path even when numba
is importable; ``PHITORSION_NUM_THREADS`` caps the numba thread pool.
"""

from __future__ import annotations

import os
from typing import Any, Callable

BACKEND_ENV = "PHITORSION_BACKEND"
THREADS_ENV = "PHITORSION_NUM_THREADS"

try:
    import numba
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def requested_backend() -> str:
    value = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if value not in ("numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {value!r}")
    return value


USE_NUMBA = HAVE_NUMBA and requested_backend() == "numba"
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA and os.environ.get(THREADS_ENV):
    numba.set_num_threads(max(1, min(int(os.environ[THREADS_ENV]), numba.config.NUMBA_NUM_THREADS)))


def njit(*args: Any, **kwargs: Any) -> Callable:
    """``numba.njit`` when numba is available, identity otherwise.

    The decorated loop kernels stay importable (and testable, slowly) on the
    numpy backend.
    """
    if HAVE_NUMBA:
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
