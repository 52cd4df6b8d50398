"""Kernel backend selection.

``KREIN_GAP_BACKEND=numpy`` forces the vectorised numpy kernels; the default
(``numba``) compiles the loop kernels with ``numba.njit`` when numba imports.
The flag is read once at import time.
"""

import logging
import os

log = logging.getLogger(__name__)

_requested = os.environ.get("KREIN_GAP_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    log.warning("unknown KREIN_GAP_BACKEND=%r, using numba", _requested)
    _requested = "numba"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

if _requested == "numba" and not HAVE_NUMBA:  # pragma: no cover
    log.warning("numba unavailable, falling back to numpy kernels")

BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"


def njit(fn):
    """Compile ``fn`` in nopython mode if numba is importable, else return it."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn  # pragma: no cover


def resolve(backend=None):
    if backend is None:
        return BACKEND
    backend = backend.lower()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:  # pragma: no cover
        return "numpy"
    return backend
