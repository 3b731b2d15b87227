"""Polygon approximation and marker shape classification."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import config
from .color import classify_color
from .regions import Region


class DegenerateContour(ValueError):
    pass


@dataclass
class ShapeReading:
    shape: str          # Triangle | Rectangle | Circle | Unknown
    color_class: str    # red | blue | green | yellow | other
    circularity: float
    vertex_count: int
    centroid: tuple


def contour_perimeter(contour: np.ndarray) -> float:
    """Length of the closed contour, diagonal steps weighted sqrt(2)."""
    pts = np.asarray(contour, np.float64)
    if len(pts) < 2:
        return float(len(pts))
    d = np.diff(np.vstack([pts, pts[:1]]), axis=0)
    return float(np.hypot(d[:, 0], d[:, 1]).sum())


def _perp_dist(points, a, b):
    """Distances from points to the line through a-b (or to a if degenerate)."""
    ab = b - a
    norm = math.hypot(ab[0], ab[1])
    if norm == 0.0:
        return np.hypot(points[:, 0] - a[0], points[:, 1] - a[1])
    return np.abs((points[:, 0] - a[0]) * ab[1] - (points[:, 1] - a[1]) * ab[0]) / norm


def _rdp_chain(pts: np.ndarray, epsilon: float) -> list:
    """Ramer-Douglas-Peucker on an open chain; returns kept indices."""
    keep = np.zeros(len(pts), bool)
    keep[0] = keep[-1] = True
    stack = [(0, len(pts) - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        seg = pts[i + 1:j]
        d = _perp_dist(seg, pts[i], pts[j])
        k = int(np.argmax(d))
        if d[k] > epsilon:
            mid = i + 1 + k
            keep[mid] = True
            stack.append((i, mid))
            stack.append((mid, j))
    return np.nonzero(keep)[0].tolist()


def approx_polygon(contour: np.ndarray, epsilon: float) -> np.ndarray:
    """RDP simplification of a closed contour, split at its two most
    distant points. Vertices are a subset of the contour points."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    pts = np.asarray(contour, np.float64)
    n = len(pts)
    if n < 4:
        raise DegenerateContour(f"contour has only {n} boundary pixels")
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    i, j = np.unravel_index(int(np.argmax(d2)), d2.shape)
    if i > j:
        i, j = j, i
    chain_a = pts[i:j + 1]
    chain_b = np.concatenate([pts[j:], pts[:i + 1]])
    verts_a = [i + k for k in _rdp_chain(chain_a, epsilon)]
    verts_b = [(j + k) % n for k in _rdp_chain(chain_b, epsilon)]
    idx = verts_a[:-1] + verts_b[:-1]
    return np.asarray(contour, np.int32)[idx]


_NEAR_STRAIGHT_DEG = 140.0


def _merge_close_vertices(verts: np.ndarray, min_edge: float) -> np.ndarray:
    """Collapse vertex pairs closer than min_edge and drop near-straight
    vertices: rasterized corners can split into two RDP vertices."""
    v = verts
    changed = True
    while changed and len(v) > 3:
        changed = False
        n = len(v)
        angles = _interior_angles(v)
        for k in range(n):
            nxt = (k + 1) % n
            gap = math.hypot(*(np.asarray(v[nxt], np.float64) - v[k]))
            if gap < min_edge:
                # larger interior angle = closer to straight = less cornery
                drop = k if angles[k] > angles[nxt] else nxt
                v = np.delete(v, drop, axis=0)
                changed = True
                break
    while len(v) > 3:
        angles = _interior_angles(v)
        worst = int(np.argmax(angles))
        if angles[worst] <= _NEAR_STRAIGHT_DEG:
            break
        v = np.delete(v, worst, axis=0)
    return v


def _interior_angles(verts: np.ndarray) -> list:
    v = np.asarray(verts, np.float64)
    n = len(v)
    out = []
    for k in range(n):
        a = v[(k - 1) % n] - v[k]
        b = v[(k + 1) % n] - v[k]
        na, nb = math.hypot(*a), math.hypot(*b)
        if na == 0.0 or nb == 0.0:
            out.append(0.0)
            continue
        cosang = max(-1.0, min(1.0, float(np.dot(a, b)) / (na * nb)))
        out.append(math.degrees(math.acos(cosang)))
    return out


def _mean_interior_rgb(region: Region, frame: np.ndarray):
    x0, y0, x1, y1 = region.bbox
    patch = frame[y0:y1 + 1, x0:x1 + 1]
    vals = patch[region.mask]
    return vals.mean(axis=0)


def classify_shape(region: Region, frame: np.ndarray = None) -> ShapeReading:
    """Classify a region as Triangle / Rectangle / Circle / Unknown.

    Color class comes from the mean interior color against the four
    competition ranges when a source frame is supplied.
    """
    color = "other"
    if frame is not None and region.mask is not None:
        color = classify_color(*_mean_interior_rgb(region, frame))

    perim = contour_perimeter(region.contour)
    circ = 4.0 * math.pi * region.area / (perim * perim) if perim > 0 else 0.0
    if region.area < config.MIN_REGION_AREA:
        return ShapeReading("Unknown", color, circ, 0, region.centroid)

    try:
        verts = approx_polygon(region.contour, config.RDP_EPSILON_FRACTION * perim)
    except DegenerateContour:
        return ShapeReading("Unknown", color, circ, 0, region.centroid)
    verts = _merge_close_vertices(verts, perim / 12.0)
    n = len(verts)

    if n >= 6:
        shape = "Circle" if circ >= config.CIRCULARITY_MIN else "Unknown"
    elif n == 3:
        shape = "Triangle"
    elif n == 4 and all(
        config.RECT_ANGLE_LO <= a <= config.RECT_ANGLE_HI
        for a in _interior_angles(verts)
    ):
        shape = "Rectangle"
    elif circ >= config.CIRCULARITY_MIN:
        shape = "Circle"
    else:
        shape = "Unknown"
    return ShapeReading(shape, color, circ, n, region.centroid)
