"""Kernel backend selection: compiled extension if present, numpy fallback otherwise.

Set PACKLAB_BACKEND=python or PACKLAB_BACKEND=compiled to force a choice
(the latter raises if the extension failed to build).
"""

from __future__ import annotations

import os

from . import motion_py

_forced = os.environ.get("PACKLAB_BACKEND")

if _forced == "python":
    _impl = motion_py
else:
    try:
        from . import _motion as _impl  # type: ignore[no-redef]
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = motion_py

BACKEND = "python" if _impl is motion_py else "compiled"

multiplicity_counts = _impl.multiplicity_counts
orbit_mask = _impl.orbit_mask

__all__ = ["BACKEND", "multiplicity_counts", "orbit_mask", "motion_py"]
