"""Hot graph kernels with a numba path and a pure-numpy fallback.

The active backend is chosen once at import time. Set ``THRESHNET_BACKEND``
to ``numpy`` to force the fallback, or to ``numba`` to require the JIT path.
Both backends operate on the same packed adjacency layout: an ``(n, words)``
``uint64`` array whose bit ``j & 63`` of word ``j >> 6`` in row ``i`` marks the
edge ``(i, j)``. Padding bits past ``n`` are always zero.
"""

import os
from types import ModuleType

from . import _numpy

try:
    from . import _numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    HAS_NUMBA = False

BACKENDS = ("numba", "numpy")


def get_backend(name: str) -> ModuleType:
    if name == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is not importable")
        return _numba
    if name == "numpy":
        return _numpy
    raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")


def _select() -> str:
    requested = os.environ.get("THRESHNET_BACKEND", "").strip().lower()
    if requested:
        get_backend(requested)
        return requested
    return "numba" if HAS_NUMBA else "numpy"


BACKEND = _select()
_active = get_backend(BACKEND)

bfs_distance_counts = _active.bfs_distance_counts
triangle_counts = _active.triangle_counts
row_popcounts = _active.row_popcounts
