"""Marker detection over downward frames."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import config
from ..arena.render import footprint_width
from ..vision import classify_shape, connected_components, in_range, morphology
from ..vision.color import COMPETITION_RANGES


@dataclass
class MarkerSighting:
    shape: str              # rectangle | circle | triangle
    color: str
    centroid_px: tuple
    area_px: int
    ground_offset: tuple    # (dx, dy) m from the drone's ground point, world frame
    world_xy: tuple         # dead-reckoned estimate

    @property
    def ground_distance(self) -> float:
        return math.hypot(*self.ground_offset)


_SHAPE_NAMES = {"Rectangle": "rectangle", "Circle": "circle", "Triangle": "triangle"}


def detect_markers(frame: np.ndarray, pose_estimate, altitude_m: float,
                   hfov_deg: float = config.CAMERA_HFOV_DEG) -> list:
    """Color-threshold, open, label, classify; one sighting per
    (shape, color, 30 cm world cell), ordered by pixel area descending."""
    h, w = frame.shape[:2]
    px, py, yaw = pose_estimate
    scale = footprint_width(max(altitude_m, 0.05), hfov_deg) / w
    r = math.radians(yaw)
    fwd = (math.sin(r), math.cos(r))
    right = (math.cos(r), -math.sin(r))

    sightings = []
    for color, rng in COMPETITION_RANGES.items():
        mask = morphology(in_range(frame, rng), "open", 2)
        for region in connected_components(mask):
            if region.area < config.MIN_REGION_AREA:
                break  # regions are sorted by area
            reading = classify_shape(region, frame)
            if reading.shape not in _SHAPE_NAMES:
                continue
            cx, cy = region.centroid
            u = (cx - w / 2.0) * scale
            f = (h / 2.0 - cy) * scale
            dx = u * right[0] + f * fwd[0]
            dy = u * right[1] + f * fwd[1]
            sightings.append(MarkerSighting(
                shape=_SHAPE_NAMES[reading.shape],
                color=color,
                centroid_px=(cx, cy),
                area_px=region.area,
                ground_offset=(dx, dy),
                world_xy=(px + dx, py + dy),
            ))

    cells = {}
    for s in sorted(sightings, key=lambda s: -s.area_px):
        key = (s.shape, s.color,
               round(s.world_xy[0] / config.DEDUPE_CELL_M),
               round(s.world_xy[1] / config.DEDUPE_CELL_M))
        if key not in cells:
            cells[key] = s
    return sorted(cells.values(), key=lambda s: -s.area_px)
