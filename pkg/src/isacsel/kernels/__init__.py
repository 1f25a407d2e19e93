"""Backend selection for the multipath application kernel.

The compiled Cython extension is used when it importable; otherwise the
numpy reference implementation takes over. ``ISACSEL_KERNEL=python`` or
``=ext`` forces one side (the latter raises if the extension is missing),
which pins the backend for reproducibility studies and benchmarks.
"""

import os

from isacsel.kernels import pyref

_forced = os.environ.get("ISACSEL_KERNEL", "").strip().lower()

if _forced == "python":
    apply_paths = pyref.apply_paths
    BACKEND = "python"
else:
    try:
        from isacsel.kernels import _multipath

        apply_paths = _multipath.apply_paths
        BACKEND = "ext"
    except ImportError:
        if _forced == "ext":
            raise ImportError(
                "ISACSEL_KERNEL=ext requested but the compiled kernel is not available"
            )
        apply_paths = pyref.apply_paths
        BACKEND = "python"

__all__ = ["apply_paths", "BACKEND", "pyref"]
