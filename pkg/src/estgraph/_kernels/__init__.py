"""Hot-loop kernels with a compiled backend and a pure-Python fallback.

The compiled module is used when it imports cleanly. Setting the environment
variable ``ESTGRAPH_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

_force_py = os.environ.get("ESTGRAPH_PURE_PYTHON", "").strip() not in ("", "0")

_impl = _pykernels
BACKEND = "python"
if not _force_py:
    try:
        from . import _ckernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _ckernels
        BACKEND = "cython"

shifted_dijkstra = _impl.shifted_dijkstra
bfs = _impl.bfs
hop_limited = _impl.hop_limited
center_distances = _impl.center_distances

__all__ = [
    "BACKEND",
    "shifted_dijkstra",
    "bfs",
    "hop_limited",
    "center_distances",
    "compiled_available",
]


def compiled_available() -> bool:
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True
