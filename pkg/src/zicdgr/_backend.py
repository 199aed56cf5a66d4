"""Kernel backend selection.

The compiled Cython module is used when it imports; otherwise the numpy
fallback.  Setting ``ZICDGR_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

_active: ModuleType | None = None


def load_backend(kind: str) -> ModuleType:
    """Import a backend by name, ``"compiled"`` or ``"python"``."""
    if kind == "compiled":
        from . import _kernels

        return _kernels
    if kind == "python":
        from . import _fallback

        return _fallback
    raise ValueError(f"unknown backend {kind!r}")


def compiled_available() -> bool:
    try:
        load_backend("compiled")
    except ImportError:
        return False
    return True


def backend() -> ModuleType:
    global _active
    if _active is None:
        forced = os.environ.get("ZICDGR_PURE_PYTHON", "").strip() not in ("", "0")
        if not forced and compiled_available():
            _active = load_backend("compiled")
        else:
            _active = load_backend("python")
    return _active


def backend_name() -> str:
    return "python" if backend().__name__.endswith("_fallback") else "compiled"


def set_backend(kind: str) -> None:
    """Switch the active backend (used by tests and the benchmark)."""
    global _active
    _active = load_backend(kind)
