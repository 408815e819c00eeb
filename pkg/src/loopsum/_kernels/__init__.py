"""Kernel backend selection.

The hot inner loops (greedy selection scan, LCS dynamic program) exist
twice: compiled in ``_speed.pyx`` and in pure Python in ``pure.py``.
The compiled module is preferred when importable; set ``LOOPSUM_PURE=1``
to force the fallback. ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

from . import pure as _pure

if os.environ.get("LOOPSUM_PURE"):
    _impl = _pure
else:
    try:
        from . import _speed as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND: str = _impl.BACKEND
lcs_length = _impl.lcs_length
greedy_select = _impl.greedy_select

__all__ = ["BACKEND", "lcs_length", "greedy_select"]
