"""Selects the dense-kernel backend: compiled extension if built, numpy otherwise.

Set TREESPECTRA_BACKEND=python or =compiled to force a choice; forcing
"compiled" raises if the extension is not importable.
"""
from __future__ import annotations

import os

from . import _speig_py

_forced = os.environ.get("TREESPECTRA_BACKEND")

if _forced == "python":
    _impl = _speig_py
else:
    try:
        from . import _speig as _impl  # type: ignore[no-redef]
    except ImportError:
        if _forced == "compiled":
            raise ImportError(
                "TREESPECTRA_BACKEND=compiled but the treespectra._speig extension is not built"
            ) from None
        _impl = _speig_py

BACKEND: str = _impl.BACKEND

eigvalsh = _impl.eigvalsh
slogdet_minpivot = _impl.slogdet_minpivot


def backends() -> dict[str, object]:
    """All importable backends keyed by name (for tests and benchmarks)."""
    found: dict[str, object] = {"python": _speig_py}
    try:
        from . import _speig

        found["compiled"] = _speig
    except ImportError:
        pass
    return found
