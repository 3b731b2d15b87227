"""Kernel backend selection.

The hot per-pixel loops (floor painting, HSV thresholding, morphology,
labeling, contour tracing) exist twice: numba jit kernels and pure-numpy
fallbacks. TELLO_ARENA_KERNELS chooses: "numba", "numpy", or "auto"
(default: numba when importable). Both backends produce identical output;
benchmarks/kernel_bench.py compares their speed.
"""

from __future__ import annotations

import os

_requested = os.environ.get("TELLO_ARENA_KERNELS", "auto").lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"TELLO_ARENA_KERNELS={_requested!r}: must be auto, numba, or numpy"
    )

if _requested == "numpy":
    from . import numpy_impl as _impl

    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as _impl

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import numpy_impl as _impl

        BACKEND = "numpy"

floor_colors = _impl.floor_colors
hsv_in_range = _impl.hsv_in_range
erode = _impl.erode
dilate = _impl.dilate
label_components = _impl.label_components
trace_contour = _impl.trace_contour
