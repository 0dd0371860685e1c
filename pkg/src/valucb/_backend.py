"""Engine backend selection.

The compiled Cython kernel is preferred when the extension imported
cleanly; otherwise every runner falls back to the pure-Python engine.
Both backends consume random draws through the same numpy bit generator
routines, so they produce identical trajectories.
"""
from __future__ import annotations

try:
    from . import _engine as _ext
except ImportError:  # pragma: no cover - depends on build environment
    _ext = None

HAVE_EXTENSION = _ext is not None

BACKENDS = ("auto", "cython", "python")


def resolve(backend: str) -> str:
    """Map a requested backend to the one that will actually run."""
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}, expected one of {BACKENDS}")
    if backend == "auto":
        return "cython" if HAVE_EXTENSION else "python"
    if backend == "cython" and not HAVE_EXTENSION:
        raise RuntimeError("compiled engine unavailable; rebuild or use backend='python'")
    return backend


def extension():
    if _ext is None:
        raise RuntimeError("compiled engine unavailable")
    return _ext
