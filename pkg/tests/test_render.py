import math
import random

import numpy as np
import pytest

from tello_arena.arena import (
    CameraModel,
    NonPositiveAltitude,
    OutOfField,
    course_preview,
    default_camera,
    footprint_width,
    load_course,
    render_downward,
    sample_floor,
)
from tello_arena.arena.course import CourseSpec, Marker


class TestSampleFloor:
    def test_paint_priority(self, course_2023):
        assert sample_floor(course_2023, (0.45, 1.0)) == (0, 0, 0)       # line
        assert sample_floor(course_2023, (3.9, 3.9)) == (255, 255, 255)  # base
        assert sample_floor(course_2023, (0.215, 1.0)) == (255, 0, 0)    # marker
        # green victim circle paints over the line crossing it
        assert sample_floor(course_2023, (3.13, 3.14)) == (0, 255, 0)

    def test_out_of_field(self, course_2023):
        with pytest.raises(OutOfField):
            sample_floor(course_2023, (-0.1, 1.0))

    def test_deterministic(self, course_2023):
        p = (1.712, 2.334)
        assert sample_floor(course_2023, p) == sample_floor(course_2023, p)


class TestRenderDownward:
    def test_uniform_floor(self):
        c = CourseSpec("plain", (4.0, 4.0))
        f = render_downward(c, (2.0, 2.0, 1.0, 33.0))
        assert f.shape == (240, 320, 3)
        assert (f == 255).all()

    def test_center_pixel_is_ground_truth(self, course_2023):
        rng = random.Random(11)
        cam = default_camera()
        for _ in range(200):
            pose = (rng.uniform(0.2, 3.8), rng.uniform(0.2, 3.8),
                    rng.uniform(0.3, 2.4), rng.uniform(0, 360))
            f = render_downward(course_2023, pose, cam)
            center = tuple(int(v) for v in f[cam.resolution[1] // 2,
                                             cam.resolution[0] // 2])
            assert center == sample_floor(course_2023, pose[:2])

    def test_footprint_formula(self):
        assert footprint_width(1.0, 60.0) == pytest.approx(1.154700, abs=1e-4)

    def test_out_of_field_renders_gray(self, course_2023):
        f = render_downward(course_2023, (0.0, 0.0, 1.5, 0.0))
        assert (f[-1, 0] == (128, 128, 128)).all()

    def test_nonpositive_altitude(self, course_2023):
        with pytest.raises(NonPositiveAltitude):
            render_downward(course_2023, (1.0, 1.0, 0.0, 0.0))

    def test_yaw_equivariance_quarter_turn(self, course_2023):
        """Drone turning cw by 90 shows the yaw-0 scene rotated ccw by 90."""
        cam = CameraModel(60.0, (241, 241))
        f0 = render_downward(course_2023, (2.0, 2.0, 1.5, 0.0), cam)
        f90 = render_downward(course_2023, (2.0, 2.0, 1.5, 90.0), cam)
        rotated = np.rot90(f0, k=1)
        match = (rotated == f90).all(axis=2).mean()
        assert match >= 0.99

    def test_footprint_scaling_marker_area(self):
        """Doubling z quarters a fully visible circle's pixel area."""
        m = Marker("circle", "red", (2.0, 2.0), (0.40,))
        c = CourseSpec("t", (4.0, 4.0), markers=(m,))

        def red_area(z):
            f = render_downward(c, (2.0, 2.0, z, 0.0))
            return int(((f[..., 0] == 255) & (f[..., 1] == 0)).sum())

        ratio = red_area(0.8) / red_area(1.6)
        assert ratio == pytest.approx(4.0, rel=0.10)


class TestPreview:
    def test_dimensions(self, course_2023):
        p = course_preview(course_2023, 100)
        assert p.shape == (400, 400, 3)

    def test_empty_course_all_white(self):
        c = CourseSpec("plain", (2.0, 2.0))
        assert (course_preview(c, 50) == 255).all()

    def test_palette_exactly_the_paint_colors(self, course_2023):
        p = course_preview(course_2023, 100)
        got = {tuple(int(v) for v in c) for c in
               np.unique(p.reshape(-1, 3), axis=0)}
        # enumerate the palette from the fixture: base, line, markers, patches
        palette = {(255, 255, 255), (0, 0, 0), (255, 0, 0), (0, 0, 255),
                   (0, 255, 0), (255, 255, 0)}
        for patch in course_2023.patches:
            if patch.kind == "checker":
                palette.add(patch.colors[0])
                palette.add(patch.colors[1])
            else:
                base = patch.color
                for off in range(-patch.amplitude, patch.amplitude + 1):
                    palette.add(tuple(min(255, max(0, v + off)) for v in base))
        assert got <= palette
        # and the important ones are present
        for must in [(0, 0, 0), (255, 0, 0), (0, 0, 255), (0, 255, 0),
                     (255, 255, 0), (255, 255, 255)]:
            assert must in got

    def test_min_resolution(self, course_2023):
        with pytest.raises(ValueError):
            course_preview(course_2023, 5)
