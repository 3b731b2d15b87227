"""Connected components and Moore boundary contours."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import kernels


@dataclass
class Region:
    area: int
    centroid: tuple          # (x, y) px
    bbox: tuple              # (x0, y0, x1, y1) inclusive
    contour: np.ndarray      # (k, 2) int32 (x, y), closed 8-connected loop
    label: int
    mask: np.ndarray = field(repr=False, default=None)  # cropped to bbox


def connected_components(mask: np.ndarray, connectivity: int = 8) -> list:
    """Exhaustive labeling; regions sorted by area descending.

    Each region's contour is Moore-traced from its topmost-leftmost
    boundary pixel.
    """
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    m = np.ascontiguousarray(mask, dtype=bool)
    labels, count = kernels.label_components(m, connectivity)
    if count == 0:
        return []

    ys, xs = np.nonzero(labels)
    lab = labels[ys, xs]
    n = count + 1
    areas = np.bincount(lab, minlength=n)
    cx = np.bincount(lab, weights=xs, minlength=n)
    cy = np.bincount(lab, weights=ys, minlength=n)
    x0 = np.full(n, np.iinfo(np.int64).max)
    y0 = np.full(n, np.iinfo(np.int64).max)
    x1 = np.full(n, -1)
    y1 = np.full(n, -1)
    np.minimum.at(x0, lab, xs)
    np.minimum.at(y0, lab, ys)
    np.maximum.at(x1, lab, xs)
    np.maximum.at(y1, lab, ys)

    # the first pixel in row-major order is the topmost-leftmost one
    order = np.lexsort((xs, ys, lab))
    first = np.searchsorted(lab[order], np.arange(1, n))
    start_x = xs[order][first]
    start_y = ys[order][first]

    regions = []
    for k in range(1, n):
        bx0, by0, bx1, by1 = int(x0[k]), int(y0[k]), int(x1[k]), int(y1[k])
        crop = np.zeros((by1 - by0 + 3, bx1 - bx0 + 3), bool)
        crop[1:-1, 1:-1] = labels[by0:by1 + 1, bx0:bx1 + 1] == k
        local = kernels.trace_contour(
            crop, int(start_y[k - 1]) - by0 + 1, int(start_x[k - 1]) - bx0 + 1
        )
        contour = local + np.array([bx0 - 1, by0 - 1], np.int32)
        regions.append(Region(
            area=int(areas[k]),
            centroid=(cx[k] / areas[k], cy[k] / areas[k]),
            bbox=(bx0, by0, bx1, by1),
            contour=contour,
            label=k,
            mask=np.ascontiguousarray(crop[1:-1, 1:-1]),
        ))
    regions.sort(key=lambda r: (-r.area, r.label))
    return regions
