"""Compile a CourseSpec into the flat arrays the paint kernels consume."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .course import PAINT, CourseSpec


@dataclass
class FloorScene:
    field_w: float
    field_d: float
    base: np.ndarray      # (3,) uint8
    segs: np.ndarray      # (n, 4) float64: x1 y1 x2 y2
    half_w: float
    markers: np.ndarray   # (m, 10) float64, see kernels
    patches: np.ndarray   # (p, 13) float64

    @classmethod
    def from_course(cls, course: CourseSpec) -> "FloorScene":
        base = np.array(course.base_color, np.uint8)

        if course.line is not None:
            pts = course.line.points
            segs = np.array(
                [(a[0], a[1], b[0], b[1]) for a, b in zip(pts[:-1], pts[1:])
                 if (a[0], a[1]) != (b[0], b[1])],
                np.float64,
            ).reshape(-1, 4)
            half_w = course.line.width_m / 2.0
        else:
            segs = np.zeros((0, 4), np.float64)
            half_w = 0.0

        marker_rows = []
        for m in course.markers:
            color = PAINT[m.color]
            row = np.zeros(10, np.float64)
            row[1:4] = color
            cx, cy = m.center
            if m.shape == "rectangle":
                rot = math.radians(m.rotation_deg)
                row[0] = 0.0
                row[4:10] = (cx, cy, m.size_m[0] / 2.0, m.size_m[1] / 2.0,
                             math.cos(rot), math.sin(rot))
            elif m.shape == "circle":
                row[0] = 1.0
                row[4:7] = (cx, cy, m.size_m[0] / 2.0)
            else:
                row[0] = 2.0
                row[4:10] = _triangle_vertices(cx, cy, m.size_m[0], m.rotation_deg)
            marker_rows.append(row)
        markers = (np.stack(marker_rows) if marker_rows
                   else np.zeros((0, 10), np.float64))

        patch_rows = []
        for p in course.patches:
            row = np.zeros(13, np.float64)
            x, y, w, h = p.rect
            row[1:5] = (x, y, x + w, y + h)
            if p.kind == "checker":
                row[0] = 0.0
                row[5] = p.cell_m
                row[7:10] = p.colors[0]
                row[10:13] = p.colors[1]
            else:
                row[0] = 1.0
                row[5] = float(p.amplitude)
                row[6] = float(p.seed)
                row[7:10] = p.color
            patch_rows.append(row)
        patches = (np.stack(patch_rows) if patch_rows
                   else np.zeros((0, 13), np.float64))

        return cls(
            field_w=float(course.field_size[0]),
            field_d=float(course.field_size[1]),
            base=base,
            segs=segs,
            half_w=float(half_w),
            markers=markers,
            patches=patches,
        )


def _triangle_vertices(cx, cy, side, rotation_deg):
    """Equilateral triangle, apex toward +y at rotation 0, CCW order."""
    circum = side / math.sqrt(3.0)
    inr = side / (2.0 * math.sqrt(3.0))
    local = ((0.0, circum), (-side / 2.0, -inr), (side / 2.0, -inr))
    rot = math.radians(rotation_deg)
    c, s = math.cos(rot), math.sin(rot)
    out = []
    for lx, ly in local:
        out.append(cx + c * lx - s * ly)
        out.append(cy + s * lx + c * ly)
    return tuple(out)
