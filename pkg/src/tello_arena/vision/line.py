"""Line pose estimation from a thresholded downward frame."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import config


@dataclass
class LineEstimate:
    lateral_offset: float   # [-1, 1], positive = line right of image center
    heading_error: float    # degrees, positive = line heads right of image up
    visible: bool
    coverage_fraction: float = 0.0


def estimate_line(mask: np.ndarray, expected_area_px: float = None) -> LineEstimate:
    """Band-centroid line estimate.

    The top-third and bottom-third bands must each contain at least
    LINE_BAND_MIN_PX foreground pixels for the line to count as visible.
    coverage_fraction is foreground relative to `expected_area_px` (the
    controller supplies the altitude-dependent expectation).
    """
    m = np.asarray(mask, dtype=bool)
    h, w = m.shape
    ys, xs = np.nonzero(m)
    coverage = 0.0
    if expected_area_px and expected_area_px > 0:
        coverage = min(1.0, len(xs) / expected_area_px)
    if len(xs) == 0:
        return LineEstimate(0.0, 0.0, False, coverage)

    top = ys < h // 3
    bottom = ys >= (2 * h) // 3
    if top.sum() < config.LINE_BAND_MIN_PX or bottom.sum() < config.LINE_BAND_MIN_PX:
        return LineEstimate(0.0, 0.0, False, coverage)

    offset = (float(xs.mean()) - w / 2.0) / (w / 2.0)
    tx, ty = float(xs[top].mean()), float(ys[top].mean())
    bx, by = float(xs[bottom].mean()), float(ys[bottom].mean())
    heading = math.degrees(math.atan2(tx - bx, -(ty - by)))
    return LineEstimate(offset, heading, True, coverage)
