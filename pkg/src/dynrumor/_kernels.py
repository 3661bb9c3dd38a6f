"""Kernel selection: compiled core when available, pure Python otherwise.

Both implementations are draw-for-draw identical; the compiled one is just
fast.  ``get_kernels("python")`` / ``get_kernels("compiled")`` pin an
implementation explicitly (equivalence tests, benchmarks).
"""

from __future__ import annotations

from dynrumor import _core_py

try:
    from dynrumor import _core  # type: ignore[attr-defined]

    HAVE_COMPILED = True
except ImportError:
    _core = None
    HAVE_COMPILED = False

active = _core if HAVE_COMPILED else _core_py

IMPLEMENTATION = active.IMPLEMENTATION

STATUS_SEGMENT_DONE = _core_py.STATUS_SEGMENT_DONE
STATUS_STOPPED = _core_py.STATUS_STOPPED
STATUS_TRACE_FULL = _core_py.STATUS_TRACE_FULL
MAX_SCAN_VERTICES = _core_py.MAX_SCAN_VERTICES

conductance_scan = active.conductance_scan
diligence_scan = active.diligence_scan
async_segment = active.async_segment
rng_u64 = active.rng_u64


def get_kernels(which: str = "auto"):
    """Return the kernel module named by ``which`` (auto/compiled/python)."""
    if which == "auto":
        return active
    if which == "python":
        return _core_py
    if which == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled core is not available in this install")
        return _core
    raise ValueError(f"unknown kernel implementation {which!r}")
