"""Autonomous 2023-mission client: line following plus marker behaviors.

The controller sees only what a real client would: the video stream,
query replies, and command acknowledgements. Pose is dead-reckoned from
issued commands; altitude comes from telemetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .. import config, events, protocol
from ..config import ControlGains
from ..sim.framing import encode_frame
from ..vision.color import black_mask
from ..vision.line import estimate_line
from .control import follow_line_control
from .detector import detect_markers
from . import semantics as sem

GROUNDED = "Grounded"
TAKING_OFF = "TakingOff"
FOLLOWING = "Following"
EXECUTING = "Executing"
DONE = "Done"
ABORTED = "Aborted"

_TICK = 1.0 / config.VIDEO_FPS


@dataclass
class MissionState:
    phase: str = GROUNDED
    behavior: str = None
    stage: str = None
    handled: list = field(default_factory=list)   # (shape, color, wx, wy)
    recording: bool = False
    pose: list = field(default_factory=lambda: [0.0, 0.0, 0.0, 0.0])  # x y z yaw
    odometer: float = 0.0
    search_deg: float = 0.0
    lost_ticks: int = 0
    hover_ticks: int = 0
    target_alt: float = config.CRUISE_ALT_M


class Recorder:
    def __init__(self, path):
        self.path = path
        self._file = None
        self.frames = 0

    @property
    def active(self) -> bool:
        return self._file is not None

    def start(self) -> bool:
        if self.active:
            return False
        self._file = open(self.path, "wb")
        self.frames = 0
        return True

    def add(self, seq, t_ms, frame):
        if self.active:
            self._file.write(encode_frame(seq, t_ms, frame))
            self.frames += 1

    def stop(self) -> int:
        if not self.active:
            return -1
        self._file.close()
        self._file = None
        return self.frames


class MissionController:
    def __init__(self, link, record_path, rescue: bool = True,
                 gains: ControlGains = None,
                 hfov_deg: float = config.CAMERA_HFOV_DEG):
        self.link = link
        self.state = MissionState()
        self.events: list = []
        self.recorder = Recorder(record_path)
        self.rescue = rescue
        self.gains = gains or ControlGains()
        self.hfov = hfov_deg
        self._last_rc = (0, 0, 0, 0)
        self._last_frame = None

    # -- plumbing ------------------------------------------------------------

    @property
    def done(self) -> bool:
        return self.state.phase in (DONE, ABORTED)

    def claim(self, kind, **payload):
        self.events.append(events.MissionEvent(self.link.now, kind, payload,
                                               events.CONTROLLER))

    def _send(self, cmd: protocol.Command):
        return self.link.send_line(protocol.serialize_command(cmd))

    def _rc(self, lr=0, fb=0, ud=0, yaw=0):
        cmd = protocol.Rc(lr, fb, ud, yaw)
        self._send(cmd)
        self._last_rc = (lr, fb, ud, yaw)

    def _dead_reckon(self, z_m: float):
        """Integrate the previously commanded channels over one tick."""
        lr, fb, ud, yaw_ch = self._last_rc
        pose = self.state.pose
        pose[3] += yaw_ch / 100.0 * config.RC_YAW_DPS * _TICK
        r = math.radians(pose[3])
        v_lr = lr / 100.0 * config.RC_HORIZ_MPS
        v_fb = fb / 100.0 * config.RC_HORIZ_MPS
        pose[0] += (v_lr * math.cos(r) + v_fb * math.sin(r)) * _TICK
        pose[1] += (-v_lr * math.sin(r) + v_fb * math.cos(r)) * _TICK
        pose[2] = z_m
        if self.state.phase == EXECUTING and self.state.stage == "run":
            self.state.odometer += abs(v_fb) * _TICK

    def _estimate(self, frame):
        return estimate_line(black_mask(frame))

    def _steer(self, frame, target_alt, z):
        """Follow the line if visible, else hold heading and cruise."""
        est = self._estimate(frame)
        alt_err = target_alt - z
        if est.visible:
            rc = follow_line_control(est, alt_err, self.gains)
            self._rc(rc.lr, rc.fb, rc.ud, rc.yaw)
            self.state.lost_ticks = 0
            return True
        self._rc(0, self.gains.cruise_fb, _clamp_ud(alt_err, self.gains), 0)
        return False

    # -- main loop ------------------------------------------------------------

    def tick(self):
        """One 10 Hz control step; call after the link advanced."""
        st = self.state
        if self.done:
            return
        if st.phase == GROUNDED:
            self._send(protocol.ModeEnter())
            self._send(protocol.StreamOn())
            self._send(protocol.TakeOff())
            st.phase = TAKING_OFF
            return

        for rec in self.link.drain_frames():
            self.recorder.add(*rec)
            self._last_frame = rec
        deferred = self.link.poll_deferred()

        z = self.link.query(protocol.ReadQuery.HEIGHT) / 100.0
        battery = self.link.query(protocol.ReadQuery.BATTERY)
        self._dead_reckon(z)

        if st.phase not in (GROUNDED, TAKING_OFF) and battery < config.ABORT_BATTERY_PCT:
            return self._abort("battery low")
        if deferred is not None and deferred.startswith("error"):
            return self._abort(f"command failed: {deferred}")
        landing_now = st.behavior == sem.LAND_GOAL and st.stage == "touchdown"
        if (st.phase in (FOLLOWING, EXECUTING) and z < 0.05
                and not self.link.pending and deferred is None
                and not landing_now):
            return self._abort("grounded unexpectedly")

        frame = self._last_frame[2] if self._last_frame else None

        if st.phase == TAKING_OFF:
            if deferred == "ok":
                st.phase = FOLLOWING
                st.target_alt = config.CRUISE_ALT_M
        elif st.phase == FOLLOWING and frame is not None:
            self._tick_following(frame, z)
        elif st.phase == EXECUTING and frame is not None:
            self._tick_executing(frame, z, deferred)

    # -- phases ------------------------------------------------------------------

    def _tick_following(self, frame, z):
        st = self.state
        sighting = self._next_trigger(frame, z)
        if sighting is not None:
            return self._trigger(sighting)
        if self._steer(frame, st.target_alt, z):
            st.search_deg = 0.0
            return
        st.lost_ticks += 1
        if st.lost_ticks <= config.LOST_TICKS_BEFORE_SEARCH:
            return
        # search spiral: rotate in place looking for the line
        self._rc(0, 0, 0, config.SEARCH_YAW_RATE)
        st.search_deg += config.SEARCH_YAW_RATE / 100.0 * config.RC_YAW_DPS * _TICK
        if st.search_deg >= config.SEARCH_MAX_DEG:
            self._abort("line lost")

    def _next_trigger(self, frame, z):
        st = self.state
        for s in detect_markers(frame, (st.pose[0], st.pose[1], st.pose[3]),
                                z, self.hfov):
            behavior = sem.marker_semantics(s.shape, s.color)
            if behavior is None:
                continue
            if behavior == sem.PICK_VICTIM and not self.rescue:
                continue
            if s.ground_distance > config.TRIGGER_RADIUS_M:
                continue
            if self._handled(s):
                continue
            return s
        return None

    def _handled(self, s) -> bool:
        for shape, color, wx, wy in self.state.handled:
            if (shape, color) == (s.shape, s.color) and math.hypot(
                s.world_xy[0] - wx, s.world_xy[1] - wy
            ) <= config.DEDUPE_CELL_M:
                return True
        return False

    def _trigger(self, s):
        st = self.state
        st.handled.append((s.shape, s.color, s.world_xy[0], s.world_xy[1]))
        behavior = sem.marker_semantics(s.shape, s.color)

        if behavior == sem.START_RECORDING:
            if self.recorder.start():
                st.recording = True
                self.claim(events.RECORDING_STARTED, frames=0)
                self.claim(events.BEHAVIOR_COMPLETED, behavior=behavior)
            return
        if behavior == sem.STOP_RECORDING:
            n = self.recorder.stop()
            if n >= 0:
                st.recording = False
                self.claim(events.RECORDING_STOPPED, frames=n)
                self.claim(events.BEHAVIOR_COMPLETED, behavior=behavior)
            return

        st.phase = EXECUTING
        st.behavior = behavior
        if behavior == sem.ASCEND_HIGH:
            st.stage = "climb"
            st.target_alt = config.HIGH_ALT_M
        elif behavior == sem.DESCEND_LOW:
            st.stage = "climb"  # altitude leg toward the low target
            st.target_alt = config.LOW_ALT_M
        elif behavior in (sem.SPIN_LEFT, sem.SPIN_RIGHT):
            st.stage = "spin"
            self._rc(0, 0, 0, 0)
            sense = "ccw" if behavior == sem.SPIN_LEFT else "cw"
            self._send(protocol.Rotate(sense, 360))
        elif behavior in (sem.PICK_VICTIM, sem.LAND_GOAL):
            st.stage = "center"

    def _tick_executing(self, frame, z, deferred):
        st = self.state
        b = st.behavior
        if b in (sem.SPIN_LEFT, sem.SPIN_RIGHT):
            if deferred == "ok":
                self.claim(events.BEHAVIOR_COMPLETED, behavior=b)
                self._resume()
            return
        if b in (sem.ASCEND_HIGH, sem.DESCEND_LOW):
            return self._tick_altitude_leg(frame, z)
        if b == sem.PICK_VICTIM:
            return self._tick_pickup(frame, z, deferred)
        if b == sem.LAND_GOAL:
            return self._tick_landing(frame, z, deferred)

    def _tick_altitude_leg(self, frame, z):
        st = self.state
        self._steer(frame, st.target_alt, z)
        if st.stage == "climb":
            reached = (z >= config.ASCEND_ALT_M + 0.05
                       if st.behavior == sem.ASCEND_HIGH
                       else z <= config.DESCEND_ALT_M - 0.25)
            if reached:
                st.stage = "run"
                st.odometer = 0.0
        elif st.stage == "run" and st.odometer >= config.BEHAVIOR_TRAVEL_M:
            self.claim(events.BEHAVIOR_COMPLETED, behavior=st.behavior)
            self._resume()

    def _marker_offset(self, frame, z, color):
        for s in detect_markers(frame, (self.state.pose[0], self.state.pose[1],
                                        self.state.pose[3]), z, self.hfov):
            if s.color == color and s.shape == "circle":
                r = math.radians(self.state.pose[3])
                dx, dy = s.ground_offset
                u = dx * math.cos(r) - dy * math.sin(r)
                f = dx * math.sin(r) + dy * math.cos(r)
                return u, f
        return None

    def _center_over(self, offset, descend_to, z):
        """P-control toward a point; returns True once settled there."""
        alt_err = descend_to - z
        if offset is None:
            self._rc(0, 0, _clamp_ud(alt_err, self.gains), 0)
            return False
        u, f = offset
        self._rc(_clamp(120 * u, 30), _clamp(120 * f, 30),
                 _clamp_ud(alt_err, self.gains), 0)
        return math.hypot(u, f) <= config.VICTIM_CENTER_TOL_M and \
            abs(alt_err) <= 0.08

    def _tick_pickup(self, frame, z, deferred):
        st = self.state
        offset = self._marker_offset(frame, z, "green")
        if st.stage == "center":
            if self._center_over(offset, config.CRUISE_ALT_M, z):
                st.stage = "descend"
        elif st.stage == "descend":
            if self._center_over(offset, config.PICKUP_ALT_M, z):
                st.stage = "hover"
                st.hover_ticks = 0
        elif st.stage == "hover":
            self._rc(0, 0, 0, 0)
            st.hover_ticks += 1
            if st.hover_ticks >= int(config.PICKUP_HOVER_S / _TICK) + 2:
                self.claim(events.VICTIM_PICKUP)
                st.stage = "ascend"
        elif st.stage == "ascend":
            alt_err = config.CRUISE_ALT_M - z
            self._rc(0, 0, _clamp_ud(alt_err, self.gains), 0)
            if z >= config.CRUISE_ALT_M - 0.1 and self._estimate(frame).visible:
                self._resume()

    def _tick_landing(self, frame, z, deferred):
        st = self.state
        offset = self._marker_offset(frame, z, "yellow")
        if st.stage == "center":
            if self._center_over(offset, config.CRUISE_ALT_M, z):
                st.stage = "descend"
        elif st.stage == "descend":
            u_f = offset
            alt_err = config.PICKUP_ALT_M - z
            if u_f is None:
                self._rc(0, 0, _clamp_ud(alt_err, self.gains), 0)
            else:
                u, f = u_f
                self._rc(_clamp(120 * u, 20), _clamp(120 * f, 20),
                         _clamp_ud(alt_err, self.gains), 0)
            settled = (u_f is not None and math.hypot(*u_f) <= 0.06
                       and z <= config.PICKUP_ALT_M + 0.08)
            if settled:
                st.stage = "touchdown"
                self._rc(0, 0, 0, 0)
                self._send(protocol.Land())
        elif st.stage == "touchdown":
            if deferred == "ok":
                self._finish_recording()
                self.claim(events.LANDED,
                           pose_estimate=[round(v, 3) for v in st.pose])
                st.phase = DONE

    def finish(self):
        """End-of-mission cleanup: finalize any open recording."""
        self._finish_recording()

    def _resume(self):
        st = self.state
        st.phase = FOLLOWING
        st.behavior = None
        st.stage = None
        st.target_alt = config.CRUISE_ALT_M
        st.lost_ticks = 0
        st.search_deg = 0.0

    def _finish_recording(self):
        if self.recorder.active:
            n = self.recorder.stop()
            self.state.recording = False
            self.claim(events.RECORDING_STOPPED, frames=n)

    def _abort(self, reason: str):
        st = self.state
        self._finish_recording()
        self.claim(events.ABORT, reason=reason)
        if st.phase not in (GROUNDED,):
            try:
                self._send(protocol.Land())
            except Exception:
                pass
        st.phase = ABORTED


def _clamp(v: float, limit: int) -> int:
    return max(-limit, min(limit, int(round(v))))


def _clamp_ud(alt_err_m: float, gains: ControlGains) -> int:
    return _clamp(gains.k_alt * alt_err_m, gains.ud_limit)
