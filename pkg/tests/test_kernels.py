"""Backend equivalence: numba kernels vs pure-numpy fallbacks."""

import numpy as np
import pytest

from tello_arena.kernels import numpy_impl

numba_impl = pytest.importorskip("tello_arena.kernels.numba_impl")


@pytest.fixture(scope="module")
def scene(course_2023):
    return course_2023.scene()


OUTSIDE = np.array([128, 128, 128], np.uint8)


class TestFloorColors:
    def test_random_points_identical(self, scene):
        rng = np.random.default_rng(0)
        xs = rng.uniform(-0.5, 4.5, 50000)
        ys = rng.uniform(-0.5, 4.5, 50000)
        args = (xs, ys, scene.field_w, scene.field_d, scene.base, scene.segs,
                scene.half_w, scene.markers, scene.patches, OUTSIDE)
        assert np.array_equal(numpy_impl.floor_colors(*args),
                              numba_impl.floor_colors(*args))

    def test_empty_scene(self):
        xs = np.array([0.5, 2.0])
        ys = np.array([0.5, 2.0])
        args = (xs, ys, 4.0, 4.0, np.array([255, 255, 255], np.uint8),
                np.zeros((0, 4)), 0.0, np.zeros((0, 10)), np.zeros((0, 13)),
                OUTSIDE)
        assert np.array_equal(numpy_impl.floor_colors(*args),
                              numba_impl.floor_colors(*args))


class TestVisionKernels:
    def _frames(self, n=10):
        rng = np.random.default_rng(5)
        for _ in range(n):
            yield rng.integers(0, 256, (40, 60, 3), dtype=np.uint8)

    def test_hsv_in_range_identical(self):
        params = [(340.0, 20.0, 0.4, 1.0, 0.3, 1.0),
                  (90.0, 150.0, 0.4, 1.0, 0.3, 1.0),
                  (0.0, 360.0, 0.0, 1.0, 0.0, 0.25)]
        for frame in self._frames():
            for p in params:
                assert np.array_equal(numpy_impl.hsv_in_range(frame, *p),
                                      numba_impl.hsv_in_range(frame, *p))

    def test_morphology_identical(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            m = rng.random((30, 30)) < 0.4
            for r in (1, 2, 3):
                assert np.array_equal(numpy_impl.erode(m, r),
                                      numba_impl.erode(m, r))
                assert np.array_equal(numpy_impl.dilate(m, r),
                                      numba_impl.dilate(m, r))

    def test_labeling_identical(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            m = rng.random((30, 30)) < 0.45
            for conn in (4, 8):
                la, ca = numpy_impl.label_components(m, conn)
                lb, cb = numba_impl.label_components(m, conn)
                assert ca == cb
                assert np.array_equal(la, lb)

    def test_contours_identical(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            m = np.zeros((32, 32), bool)
            m[1:-1, 1:-1] = rng.random((30, 30)) < 0.5
            labels, count = numpy_impl.label_components(m, 8)
            for k in range(1, count + 1):
                ys, xs = np.nonzero(labels == k)
                order = np.lexsort((xs, ys))
                sy, sx = int(ys[order[0]]), int(xs[order[0]])
                comp = labels == k
                ca = numpy_impl.trace_contour(comp, sy, sx)
                cb = numba_impl.trace_contour(comp, sy, sx)
                assert np.array_equal(ca, cb)


class TestRenderThroughBothBackends:
    def test_full_frame_identical(self, course_2023, monkeypatch):
        from tello_arena import kernels
        from tello_arena.arena import render as render_mod

        pose = (1.2, 1.7, 1.1, 37.0)
        monkeypatch.setattr(kernels, "floor_colors", numba_impl.floor_colors)
        f_nb = render_mod.render_downward(course_2023, pose)
        monkeypatch.setattr(kernels, "floor_colors", numpy_impl.floor_colors)
        f_np = render_mod.render_downward(course_2023, pose)
        assert np.array_equal(f_nb, f_np)
