"""Binary morphology with a square structuring element."""

from __future__ import annotations

import numpy as np

from .. import kernels

_OPS = ("erode", "dilate", "open", "close")


def morphology(mask: np.ndarray, op: str, radius: int) -> np.ndarray:
    """Apply op with a (2*radius+1) square element; outside is background."""
    if op not in _OPS:
        raise ValueError(f"op must be one of {_OPS}, got {op!r}")
    if radius < 1:
        raise ValueError("radius must be >= 1")
    m = np.ascontiguousarray(mask, dtype=bool)
    if op == "erode":
        return kernels.erode(m, radius)
    if op == "dilate":
        return kernels.dilate(m, radius)
    if op == "open":
        return kernels.dilate(kernels.erode(m, radius), radius)
    return kernels.erode(kernels.dilate(m, radius), radius)
