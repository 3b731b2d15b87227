import math

import numpy as np
import pytest

from tello_arena.vision import (
    DegenerateContour,
    approx_polygon,
    classify_shape,
    connected_components,
    contour_perimeter,
)


def square_contour(side=40):
    """Perfect axis-aligned square boundary, clockwise from top-left."""
    pts = []
    for x in range(side):
        pts.append((x, 0))
    for y in range(side):
        pts.append((side - 1, y))
    for x in range(side - 1, -1, -1):
        pts.append((x, side - 1))
    for y in range(side - 1, -1, -1):
        pts.append((0, y))
    seen = set()
    out = []
    for p in pts:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return np.array(out, np.int32)


class TestApproxPolygon:
    def test_square_four_corners(self):
        verts = approx_polygon(square_contour(40), 3.0)
        assert len(verts) == 4

    def test_straight_segment_two_endpoints(self):
        # 1-px line traced out and back: a degenerate closed contour
        pts = [(x, 0) for x in range(30)] + [(x, 0) for x in range(28, 0, -1)]
        verts = approx_polygon(np.array(pts, np.int32), 3.0)
        assert len(verts) == 2

    def test_rasterized_circle_many_vertices(self):
        h = w = 80
        yy, xx = np.mgrid[0:h, 0:w]
        mask = (xx - 40) ** 2 + (yy - 40) ** 2 <= 30 * 30
        (reg,) = connected_components(mask)
        verts = approx_polygon(reg.contour, 2.0)
        assert len(verts) >= 8

    def test_max_deviation_bounded(self):
        h = w = 80
        yy, xx = np.mgrid[0:h, 0:w]
        mask = (xx - 40) ** 2 + (yy - 40) ** 2 <= 25 * 25
        (reg,) = connected_components(mask)
        eps = 3.0
        verts = approx_polygon(reg.contour, eps).astype(float)
        contour = reg.contour.astype(float)
        # every contour point within eps of the polygon outline
        worst = 0.0
        for p in contour:
            best = math.inf
            for k in range(len(verts)):
                a, b = verts[k], verts[(k + 1) % len(verts)]
                ab = b - a
                L2 = (ab ** 2).sum()
                t = 0.0 if L2 == 0 else max(0.0, min(1.0, ((p - a) @ ab) / L2))
                best = min(best, float(np.hypot(*(a + t * ab - p))))
            worst = max(worst, best)
        assert worst <= eps + 1e-9

    def test_vertices_subset_of_contour(self):
        c = square_contour(24)
        verts = approx_polygon(c, 3.0)
        contour_set = {tuple(p) for p in c.tolist()}
        for v in verts.tolist():
            assert tuple(v) in contour_set

    def test_degenerate(self):
        with pytest.raises(DegenerateContour):
            approx_polygon(np.array([[0, 0], [1, 0], [1, 1]], np.int32), 2.0)


class TestClassifyShape:
    def _region_from_mask(self, mask):
        regs = connected_components(mask)
        assert regs
        return regs[0]

    def test_disc(self):
        yy, xx = np.mgrid[0:90, 0:90]
        reg = self._region_from_mask((xx - 45) ** 2 + (yy - 45) ** 2 <= 30 * 30)
        reading = classify_shape(reg)
        assert reading.shape == "Circle"
        assert reading.circularity >= 0.88

    def test_axis_aligned_rectangle(self):
        m = np.zeros((60, 90), bool)
        m[15:39, 20:68] = True  # 24x48 = competition aspect 1:2
        reading = classify_shape(self._region_from_mask(m))
        assert reading.shape == "Rectangle"

    def test_triangle(self):
        h = w = 90
        yy, xx = np.mgrid[0:h, 0:w]
        # equilateral-ish triangle via half-plane rasterization
        cx, cy, side = 45.0, 50.0, 60.0
        circum = side / math.sqrt(3)
        inr = side / (2 * math.sqrt(3))
        v = [(cx, cy - circum), (cx - side / 2, cy + inr), (cx + side / 2, cy + inr)]
        m = np.ones((h, w), bool)
        for (ax, ay), (bx, by) in zip(v, v[1:] + v[:1]):
            # image coordinates: y grows downward, so the winding flips
            m &= (bx - ax) * (yy - ay) - (by - ay) * (xx - ax) <= 0
        reading = classify_shape(self._region_from_mask(m))
        assert reading.shape == "Triangle"

    def test_small_region_unknown(self):
        m = np.zeros((20, 20), bool)
        m[5:10, 5:10] = True  # 25 px < 80
        reading = classify_shape(self._region_from_mask(m))
        assert reading.shape == "Unknown"

    def test_color_from_frame(self):
        m = np.zeros((60, 60), bool)
        m[10:40, 10:50] = True
        frame = np.full((60, 60, 3), 255, np.uint8)
        frame[m] = (0, 0, 255)
        reading = classify_shape(self._region_from_mask(m), frame)
        assert reading.color_class == "blue"
        assert classify_shape(self._region_from_mask(m)).color_class == "other"

    def test_circularity_definition(self):
        yy, xx = np.mgrid[0:70, 0:70]
        reg = self._region_from_mask((xx - 35) ** 2 + (yy - 35) ** 2 <= 25 * 25)
        per = contour_perimeter(reg.contour)
        reading = classify_shape(reg)
        assert reading.circularity == pytest.approx(
            4 * math.pi * reg.area / per ** 2
        )
        assert 0 < reading.circularity <= 1.1


class TestRenderedInvariance:
    """Classification holds under translation and rotation of rendered markers."""

    def test_rotation_translation_invariance(self):
        import random

        from tello_arena.arena.course import CourseSpec, Marker
        from tello_arena.arena.render import render_downward
        from tello_arena.vision import in_range, morphology
        from tello_arena.vision.color import COMPETITION_RANGES

        rng = random.Random(5)
        want = {"rectangle": "Rectangle", "circle": "Circle", "triangle": "Triangle"}
        ok = total = 0
        for shape, color, size in [
            ("rectangle", "red", (0.24, 0.12)),
            ("circle", "blue", (0.20,)),
            ("triangle", "red", (0.15,)),
        ]:
            for _ in range(40):
                rot = rng.uniform(0, 360)
                dx, dy = rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15)
                m = Marker(shape, color, (2.0 + dx, 2.0 + dy), size, "left", rot)
                c = CourseSpec("t", (4.0, 4.0), markers=(m,))
                frame = render_downward(c, (2.0, 2.0, 0.8, 0.0))
                mask = morphology(in_range(frame, COMPETITION_RANGES[color]), "open", 2)
                regs = connected_components(mask)
                total += 1
                if regs and classify_shape(regs[0], frame).shape == want[shape]:
                    ok += 1
        assert ok / total >= 0.95
