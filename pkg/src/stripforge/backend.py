"""Kernel backend selection.

Prefers the compiled Cython extension; falls back to the pure-numpy
implementation. ``STRIPFORGE_BACKEND=python`` forces the fallback (used by
the benchmark and backend-parity tests).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("STRIPFORGE_BACKEND", "").lower() == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

frame_rk4 = _impl.frame_rk4
duffing_rk4 = _impl.duffing_rk4
