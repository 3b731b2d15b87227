"""Proportional line-following control law."""

from __future__ import annotations

from .. import protocol
from ..config import ControlGains
from ..vision.line import LineEstimate


class LineLost(RuntimeError):
    pass


def _clamp(v: float, limit: int) -> int:
    return max(-limit, min(limit, int(round(v))))


def follow_line_control(est: LineEstimate, altitude_error_m: float = 0.0,
                        gains: ControlGains = None) -> protocol.Rc:
    """Rc channels steering along the estimated line at cruise speed."""
    if not est.visible:
        raise LineLost("no line in view")
    g = gains or ControlGains()
    return protocol.Rc(
        lr=_clamp(g.k_lateral * est.lateral_offset * 100.0, g.lr_limit),
        fb=g.cruise_fb,
        ud=_clamp(g.k_alt * altitude_error_m, g.ud_limit),
        yaw=_clamp(g.k_heading * est.heading_error, g.yaw_limit),
    )
