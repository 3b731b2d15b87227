"""Authoritative drone state and in-flight motion plans."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import config


@dataclass
class MotionPlan:
    """One deferred-reply maneuver; at most one in flight at a time."""

    kind: str                      # takeoff|land|straight|rotate|flip|go|curve
    duration: float                # s
    reply_to: object = None        # opaque token answered Ok on completion
    elapsed: float = 0.0
    prev_frac: float = 0.0
    delta: np.ndarray = None       # (3,) world displacement (linear kinds)
    delta_yaw: float = 0.0         # signed degrees (rotate)
    path: np.ndarray = None        # (n, 3) sampled points (curve)
    path_cum: np.ndarray = None    # (n,) cumulative arclength
    speed: float = 0.0             # m/s along the curve
    prev_dist: float = 0.0

    @property
    def progress(self) -> float:
        return min(1.0, self.elapsed / self.duration) if self.duration else 1.0


@dataclass
class DroneState:
    x: float
    y: float
    z: float = 0.0
    yaw: float = 0.0               # degrees, clockwise-positive from +y
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0
    yaw_rate: float = 0.0
    flying: bool = False
    sdk_mode: bool = False
    battery: float = 100.0
    speed_setting: int = config.DEFAULT_SPEED_CMS
    rc: tuple = (0, 0, 0, 0)
    stream_on: bool = False
    time_aloft: float = 0.0
    vps_confidence: float = 1.0
    plan: Optional[MotionPlan] = field(default=None, repr=False)

    @property
    def pose(self) -> tuple:
        return (self.x, self.y, self.z, self.yaw)

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])
