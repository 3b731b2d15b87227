"""Downward-camera software renderer and ground-truth paint queries.

Pinhole model looking straight down through the mirror rig: pixel
(i, j) maps to the floor at an offset of ((i - w//2), (h//2 - j)) pixels
from the optical axis, scaled by the footprint; image "up" is the
drone's forward direction. Nearest sampling, no filtering.
"""

from __future__ import annotations

import math

import numpy as np

from .. import config, kernels
from .course import CameraModel, CourseSpec


class NonPositiveAltitude(ValueError):
    pass


class OutOfField(ValueError):
    pass


def default_camera() -> CameraModel:
    return CameraModel(
        horizontal_fov=config.CAMERA_HFOV_DEG,
        resolution=(config.CAMERA_WIDTH, config.CAMERA_HEIGHT),
        orientation="downward-via-mirror",
    )


def footprint_width(z: float, hfov_deg: float) -> float:
    """Ground width seen at altitude z, metres."""
    return 2.0 * z * math.tan(math.radians(hfov_deg / 2.0))


_OUTSIDE = np.array(config.OUT_OF_FIELD_COLOR, np.uint8)


def _paint(scene, xs, ys):
    flat = kernels.floor_colors(
        xs.ravel(), ys.ravel(), scene.field_w, scene.field_d, scene.base,
        scene.segs, scene.half_w, scene.markers, scene.patches, _OUTSIDE,
    )
    return flat.reshape(xs.shape + (3,))


def render_downward(course: CourseSpec, pose, cam: CameraModel = None) -> np.ndarray:
    """Render the downward frame for pose (x, y, z, yaw_deg)."""
    x, y, z, yaw = pose
    if z <= 0.0:
        raise NonPositiveAltitude(f"z={z}")
    if cam is None:
        cam = default_camera()
    if cam.orientation != "downward-via-mirror":
        raise ValueError("render_downward models only the mirror-rig camera")
    w, h = cam.resolution
    scale = footprint_width(z, cam.horizontal_fov) / w
    yaw_r = math.radians(yaw)
    co, si = math.cos(yaw_r), math.sin(yaw_r)
    u = (np.arange(w, dtype=np.float64) - (w // 2))[None, :]
    f = ((h // 2) - np.arange(h, dtype=np.float64))[:, None]
    xs = x + (u * co + f * si) * scale
    ys = y + (-u * si + f * co) * scale
    return _paint(course.scene(), xs, ys)


def sample_floor(course: CourseSpec, p) -> tuple:
    """Ground-truth paint color at a field point, RGB8."""
    scene = course.scene()
    x, y = float(p[0]), float(p[1])
    if not (0.0 <= x <= scene.field_w and 0.0 <= y <= scene.field_d):
        raise OutOfField(f"({x}, {y}) outside {scene.field_w}x{scene.field_d}")
    out = kernels.floor_colors(
        np.array([x]), np.array([y]), scene.field_w, scene.field_d, scene.base,
        scene.segs, scene.half_w, scene.markers, scene.patches, _OUTSIDE,
    )
    return tuple(int(v) for v in out[0])


def course_preview(course: CourseSpec, px_per_m: int) -> np.ndarray:
    """Orthographic full-field image, north (+y) up."""
    if px_per_m < 10:
        raise ValueError("px_per_m must be >= 10")
    scene = course.scene()
    w_px = int(round(scene.field_w * px_per_m))
    h_px = int(round(scene.field_d * px_per_m))
    xs = ((np.arange(w_px, dtype=np.float64) + 0.5) / px_per_m)[None, :]
    ys = ((h_px - np.arange(h_px, dtype=np.float64) - 0.5) / px_per_m)[:, None]
    return _paint(scene, np.broadcast_to(xs, (h_px, w_px)),
                  np.broadcast_to(ys, (h_px, w_px)))


def floor_patch(course: CourseSpec, x: float, y: float,
                footprint_m: float = config.VPS_PATCH_FOOTPRINT_M,
                px: int = config.VPS_PATCH_PX) -> np.ndarray:
    """Fixed-footprint ground patch under (x, y); feeds the VPS model."""
    scene = course.scene()
    scale = footprint_m / px
    u = (np.arange(px, dtype=np.float64) - px // 2) * scale
    xs = x + u[None, :]
    ys = y + u[::-1, None]
    return _paint(scene, np.broadcast_to(xs, (px, px)),
                  np.broadcast_to(ys, (px, px)))
