import json
import math

import pytest

from tello_arena.arena import course as arena_course
from tello_arena.arena import (
    DimensionMismatch,
    GeometryOutOfField,
    SchemaError,
    line_nearest,
    load_course,
    validate_course,
)


def minimal_doc():
    return {
        "name": "mini",
        "field_size": [4.0, 4.0],
        "line": {"width_cm": 5, "points": [[0.5, 0.5], [0.5, 3.0]]},
        "start_pad": [0.5, 0.5],
    }


class TestLoadCourse:
    def test_minimal_document(self):
        c = load_course(minimal_doc())
        assert c.field_size == (4.0, 4.0)
        assert c.base_color == (255, 255, 255)
        assert c.line.width_m == pytest.approx(0.05)
        assert c.markers == ()

    def test_red_circle_wrong_diameter(self):
        doc = minimal_doc()
        doc["markers"] = [{"shape": "circle", "color": "red",
                           "center": [0.7, 1.0], "diameter_cm": 25}]
        with pytest.raises(DimensionMismatch):
            load_course(doc)

    def test_reference_fixture(self, course_2023_path):
        c = load_course(course_2023_path)
        assert len(c.markers) == 8
        assert validate_course(c) == []
        assert c.profile == "2023"

    def test_rings_fixture(self, course_rings_path):
        c = load_course(course_rings_path)
        assert validate_course(c) == []
        assert len(c.rings) == 2
        assert c.table.height_m == pytest.approx(0.70)

    def test_missing_field_size(self):
        with pytest.raises(SchemaError) as ei:
            load_course({"name": "x"})
        assert "field_size" in str(ei.value)

    def test_bad_json_file(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        with pytest.raises(SchemaError):
            load_course(p)

    def test_geometry_out_of_field(self):
        doc = minimal_doc()
        doc["markers"] = [{"shape": "circle", "color": "red",
                           "center": [3.99, 1.0], "diameter_cm": 20}]
        with pytest.raises(GeometryOutOfField):
            load_course(doc)

    def test_marker_size_defaults_from_table(self):
        doc = minimal_doc()
        doc["markers"] = [{"shape": "rectangle", "color": "blue",
                           "center": [0.8, 1.0]}]
        c = load_course(doc)
        assert c.markers[0].size_m == (0.24, 0.12)


class TestValidateCourse:
    def test_marker_too_far_from_line(self):
        doc = minimal_doc()
        c = load_course(doc)
        far = arena_course.Marker("circle", "red", (2.0, 1.0), (0.20,))
        c.markers = (far,)
        rules = [v.rule for v in validate_course(c)]
        assert "TooFarFromLine" in rules

    def test_line_width_rule_2023(self):
        doc = minimal_doc()
        doc["profile"] = "2023"
        doc["line"]["width_cm"] = 3
        c = load_course(doc)
        rules = [v.rule for v in validate_course(c)]
        assert "LineWidthRule" in rules

    def test_victim_requires_green_circle(self):
        doc = minimal_doc()
        doc["profile"] = "2023"
        doc["victim"] = [0.5, 2.0]
        c = load_course(doc)
        rules = [v.rule for v in validate_course(c)]
        assert "VictimCircleRule" in rules

    def test_marker_overlapping_line_flagged(self):
        c = load_course(minimal_doc())
        near = arena_course.Marker("circle", "red", (0.55, 1.0), (0.20,))
        c.markers = (near,)
        rules = [v.rule for v in validate_course(c)]
        assert "MarkerOverlapsLine" in rules


class TestLineNearest:
    def test_first_vertex(self, course_2023):
        s, d, tangent = line_nearest(course_2023, (0.45, 0.4))
        assert s == pytest.approx(0.0, abs=1e-9)
        assert d == pytest.approx(0.0, abs=1e-9)
        assert tangent == pytest.approx(0.0)  # first leg heads north

    def test_perpendicular_offset(self):
        c = load_course(minimal_doc())
        # 10 cm east of the midpoint of the vertical segment
        s, d, tangent = line_nearest(c, (0.6, 1.75))
        assert d == pytest.approx(0.10)
        assert s == pytest.approx(1.25)
        assert tangent == pytest.approx(0.0)

    def test_no_line(self, course_rings):
        with pytest.raises(arena_course.NoLine):
            line_nearest(course_rings, (1.0, 1.0))

    def test_matches_brute_force_sampler(self, course_2023):
        """Oracle: walk the polyline at 1 mm steps, take the closest sample."""
        import random

        pts = course_2023.line.points
        samples = []  # (arclength, x, y)
        acc = 0.0
        for (ax, ay), (bx, by) in zip(pts[:-1], pts[1:]):
            seg = math.hypot(bx - ax, by - ay)
            n = int(seg / 0.001)
            for i in range(n):
                t = i / n
                samples.append((acc + t * seg, ax + t * (bx - ax), ay + t * (by - ay)))
            acc += seg
        samples.append((acc, pts[-1][0], pts[-1][1]))

        rng = random.Random(3)
        for _ in range(60):
            p = (rng.uniform(0, 4), rng.uniform(0, 4))
            s, d, _ = line_nearest(course_2023, p)
            dists = [(sa, math.hypot(p[0] - sx, p[1] - sy)) for sa, sx, sy in samples]
            bs, bd = min(dists, key=lambda t: t[1])
            assert abs(d - bd) < 1e-3
            # arclength comparable only when the nearest point is unambiguous
            near = [sa for sa, dd in dists if dd <= bd + 0.002]
            if max(near) - min(near) < 0.01:
                assert abs(s - bs) < 2e-3
