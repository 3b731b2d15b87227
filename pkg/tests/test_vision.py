import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tello_arena.vision import (
    HsvRange,
    black_mask,
    estimate_line,
    in_range,
    morphology,
    rgb_to_hsv,
)
from tello_arena.vision.color import COMPETITION_RANGES, hsv_to_rgb


class TestRgbToHsv:
    def test_pure_red(self):
        assert rgb_to_hsv(255, 0, 0) == (0.0, 1.0, 1.0)

    def test_gray(self):
        h, s, v = rgb_to_hsv(128, 128, 128)
        assert (h, s) == (0.0, 0.0)
        assert v == pytest.approx(0.502, abs=1e-3)

    def test_pure_blue(self):
        assert rgb_to_hsv(0, 0, 255) == (240.0, 1.0, 1.0)

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    def test_roundtrip_within_one_step(self, r, g, b):
        h, s, v = rgb_to_hsv(r, g, b)
        if s > 0.01 and v > 0.01:
            r2, g2, b2 = hsv_to_rgb(h, s, v)
            assert abs(r - r2) <= 1 and abs(g - g2) <= 1 and abs(b - b2) <= 1


class TestInRange:
    def test_all_red_frame(self):
        f = np.zeros((8, 8, 3), np.uint8)
        f[..., 0] = 255
        assert in_range(f, COMPETITION_RANGES["red"]).all()

    def test_white_not_red(self):
        f = np.full((8, 8, 3), 255, np.uint8)
        assert not in_range(f, COMPETITION_RANGES["red"]).any()

    def test_hue_wraparound(self):
        rng = HsvRange(340.0, 20.0, 0.2, 1.0, 0.2, 1.0)
        # hue 350 pixel
        f = np.zeros((1, 1, 3), np.uint8)
        f[0, 0] = hsv_to_rgb(350.0, 0.8, 0.9)
        assert in_range(f, rng).all()
        f[0, 0] = hsv_to_rgb(180.0, 0.8, 0.9)
        assert not in_range(f, rng).any()

    def test_black_mask(self):
        f = np.full((4, 4, 3), 255, np.uint8)
        f[1, 1] = (0, 0, 0)
        f[2, 2] = (40, 40, 40)
        m = black_mask(f)
        assert m[1, 1] and m[2, 2]
        assert m.sum() == 2

    def test_empty_interval_rejected(self):
        with pytest.raises(ValueError):
            HsvRange(0, 360, 0.5, 0.4)


def random_masks(seed, n, shape=(48, 48), p=0.35):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield rng.random(shape) < p


class TestMorphology:
    def test_open_idempotent(self):
        for m in random_masks(1, 50):
            o1 = morphology(m, "open", 1)
            assert (morphology(o1, "open", 1) == o1).all()

    def test_single_pixel_erodes_away(self):
        m = np.zeros((9, 9), bool)
        m[4, 4] = True
        assert not morphology(m, "erode", 1).any()

    def test_dilation_grows_square(self):
        m = np.zeros((20, 20), bool)
        m[5:15, 5:15] = True
        d = morphology(m, "dilate", 1)
        assert d.sum() == 12 * 12
        assert d[4:16, 4:16].all()

    def test_dilate_extensive_erode_antiextensive(self):
        for m in random_masks(2, 30):
            assert (m <= morphology(m, "dilate", 1)).all()
            assert (morphology(m, "erode", 1) <= m).all()

    def test_duality_on_interior(self):
        """erode(m) == ~dilate(~m) away from the image border."""
        r = 2
        for m in random_masks(3, 30):
            a = morphology(m, "erode", r)
            b = ~morphology(~m, "dilate", r)
            assert (a[r:-r, r:-r] == b[r:-r, r:-r]).all()

    def test_open_close_composition(self):
        m = next(random_masks(4, 1))
        assert (morphology(m, "open", 1)
                == morphology(morphology(m, "erode", 1), "dilate", 1)).all()
        assert (morphology(m, "close", 1)
                == morphology(morphology(m, "dilate", 1), "erode", 1)).all()

    def test_bad_args(self):
        m = np.zeros((4, 4), bool)
        with pytest.raises(ValueError):
            morphology(m, "blur", 1)
        with pytest.raises(ValueError):
            morphology(m, "erode", 0)


class TestEstimateLine:
    def _vertical_line_mask(self, w=320, h=240, center=None, width=16):
        center = w // 2 if center is None else center
        m = np.zeros((h, w), bool)
        m[:, center - width // 2:center + width // 2] = True
        return m

    def test_centered_vertical_line(self):
        est = estimate_line(self._vertical_line_mask())
        assert est.visible
        assert est.lateral_offset == pytest.approx(0.0, abs=0.01)
        assert est.heading_error == pytest.approx(0.0, abs=0.5)

    def test_shifted_line_offset(self):
        est = estimate_line(self._vertical_line_mask(center=160 + 40))
        assert est.lateral_offset == pytest.approx(40 / 160, abs=0.01)

    def test_line_to_the_right_is_positive(self):
        est = estimate_line(self._vertical_line_mask(center=240))
        assert est.lateral_offset > 0

    def test_empty_mask_not_visible(self):
        est = estimate_line(np.zeros((240, 320), bool))
        assert not est.visible
        assert est.lateral_offset == 0.0
        assert est.heading_error == 0.0

    def test_rotated_line_heading(self, course_2023):
        """Render the real course line at a known approach angle."""
        import math

        from tello_arena.arena import render_downward

        # drone over the first leg (heading 0) but yawed 20 deg right:
        # the line should appear tilted 20 deg to the LEFT of image up
        frame = render_downward(course_2023, (0.45, 1.3, 1.2, 20.0))
        est = estimate_line(black_mask(frame))
        assert est.visible
        assert est.heading_error == pytest.approx(-20.0, abs=2.0)

    def test_coverage_fraction(self):
        m = self._vertical_line_mask()
        est = estimate_line(m, expected_area_px=float(m.sum()))
        assert est.coverage_fraction == pytest.approx(1.0)
        est2 = estimate_line(m, expected_area_px=float(m.sum() * 2))
        assert est2.coverage_fraction == pytest.approx(0.5)
