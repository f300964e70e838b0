"""Backend selection for the numeric kernels.

Kernels are compiled with ``numba.njit`` unless numba is missing or the
environment variable ``DEBATE_FORGE_NO_NUMBA`` is set to a truthy value, in
which case the pure-numpy implementations run instead.
"""

from __future__ import annotations

import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("DEBATE_FORGE_NO_NUMBA", "").strip().lower() in _FALSY
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(fn):
    """Compile ``fn`` when the numba backend is active, else return it unchanged."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def compile_now(fn):
    """Always-compiled variant, for benchmarks and backend parity tests."""
    if numba is None:  # pragma: no cover
        raise RuntimeError("numba is not installed")
    return numba.njit(cache=True, nogil=True)(fn)
