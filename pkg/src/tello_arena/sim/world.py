"""Fixed-timestep drone simulation: command semantics, kinematics,
VPS drift, collisions, telemetry."""

from __future__ import annotations

import math

import numpy as np

from .. import config, events, protocol
from ..arena.course import CourseSpec
from ..arena.render import default_camera, floor_patch
from .state import DroneState, MotionPlan

_ALPHA = 1.0 - math.exp(-config.DT / config.VELOCITY_TAU_S)


def _heading_vectors(yaw_deg: float):
    r = math.radians(yaw_deg)
    fwd = np.array([math.sin(r), math.cos(r), 0.0])
    right = np.array([math.cos(r), -math.sin(r), 0.0])
    return fwd, right


def wrap180(deg: float) -> float:
    return (deg + 180.0) % 360.0 - 180.0


class SimWorld:
    """Single authoritative owner of the drone and the mission clock.

    apply_command() returns a Response, or None when the reply is
    deferred to plan completion; step() returns the (reply_to, Response)
    pairs that completed during that step.
    """

    def __init__(self, course: CourseSpec, seed: int, camera=None):
        self.course = course
        self.camera = camera or default_camera()
        self.rng = np.random.default_rng(seed)
        self.seed = seed
        self.clock = 0.0
        self.events: list = []
        self.drone = DroneState(x=course.start_pad[0], y=course.start_pad[1])

    # -- events ------------------------------------------------------------

    def emit(self, kind: str, payload: dict = None, source: str = events.SIM_TRUTH):
        self.events.append(events.MissionEvent(self.clock, kind, payload or {}, source))

    # -- command application -------------------------------------------------

    def apply_command(self, cmd: protocol.Command, reply_to=None):
        d = self.drone
        if isinstance(cmd, protocol.ModeEnter):
            d.sdk_mode = True
            return protocol.Ok()
        if isinstance(cmd, protocol.Read):
            return self.answer_query(cmd.query)
        if not d.sdk_mode:
            return protocol.Error("not in sdk mode")

        if isinstance(cmd, protocol.Emergency):
            if d.flying:
                self._ground(fall=True)
            return protocol.Ok()
        if isinstance(cmd, protocol.StreamOn):
            d.stream_on = True
            return protocol.Ok()
        if isinstance(cmd, protocol.StreamOff):
            d.stream_on = False
            return protocol.Ok()
        if isinstance(cmd, protocol.SetSpeed):
            d.speed_setting = cmd.speed
            return protocol.Ok()
        if isinstance(cmd, protocol.Wifi):
            return protocol.Ok()  # provisioning is hardware-only
        if isinstance(cmd, protocol.Rc):
            d.rc = (cmd.lr, cmd.fb, cmd.ud, cmd.yaw)
            return protocol.Ok()

        if isinstance(cmd, protocol.TakeOff):
            if d.flying:
                return protocol.Error("already flying")
            if d.battery <= 0:
                return protocol.Error("battery empty")
            d.flying = True
            d.plan = MotionPlan(
                "takeoff",
                duration=config.HOVER_ALTITUDE_M / config.TAKEOFF_SPEED_MPS,
                reply_to=reply_to,
                delta=np.array([0.0, 0.0, config.HOVER_ALTITUDE_M]),
            )
            return None

        if not d.flying:
            return protocol.Error("not flying")
        if d.plan is not None:
            return protocol.Error("busy")

        if isinstance(cmd, protocol.Land):
            d.plan = MotionPlan(
                "land",
                duration=max(config.DT, d.z / config.LAND_SPEED_MPS),
                reply_to=reply_to,
                delta=np.array([0.0, 0.0, -d.z]),
            )
            return None
        if isinstance(cmd, protocol.Move):
            fwd, right = _heading_vectors(d.yaw)
            direction = {
                "up": np.array([0.0, 0.0, 1.0]),
                "down": np.array([0.0, 0.0, -1.0]),
                "forward": fwd,
                "back": -fwd,
                "right": right,
                "left": -right,
            }[cmd.direction]
            dist = cmd.distance / 100.0
            speed = d.speed_setting / 100.0
            d.plan = MotionPlan("straight", duration=dist / speed,
                                reply_to=reply_to, delta=direction * dist)
            return None
        if isinstance(cmd, protocol.Rotate):
            signed = cmd.angle if cmd.sense == "cw" else -cmd.angle
            d.plan = MotionPlan("rotate",
                                duration=cmd.angle / config.ROTATION_RATE_DPS,
                                reply_to=reply_to, delta_yaw=float(signed))
            return None
        if isinstance(cmd, protocol.Flip):
            fwd, right = _heading_vectors(d.yaw)
            axes = {
                "f": fwd, "b": -fwd, "l": -right, "r": right,
                "fl": fwd - right, "fr": fwd + right,
                "bl": -fwd - right, "br": -fwd + right,
            }
            v = axes[cmd.direction]
            v = v / np.linalg.norm(v)
            d.plan = MotionPlan("flip", duration=config.FLIP_DURATION_S,
                                reply_to=reply_to,
                                delta=v * config.FLIP_DISPLACEMENT_M)
            return None
        if isinstance(cmd, protocol.Go):
            delta = self._body_to_world(cmd.x, cmd.y, cmd.z)
            dist = float(np.linalg.norm(delta))
            speed = cmd.speed / 100.0
            d.plan = MotionPlan("go", duration=max(config.DT, dist / speed),
                                reply_to=reply_to, delta=delta)
            return None
        if isinstance(cmd, protocol.Curve):
            p0 = d.position
            w1 = p0 + self._body_to_world(cmd.x1, cmd.y1, cmd.z1)
            w2 = p0 + self._body_to_world(cmd.x2, cmd.y2, cmd.z2)
            # quadratic Bezier through w1 at t=0.5
            ctrl = 2.0 * w1 - (p0 + w2) / 2.0
            t = np.linspace(0.0, 1.0, 257)[:, None]
            path = ((1 - t) ** 2) * p0 + 2 * t * (1 - t) * ctrl + (t ** 2) * w2
            seg = np.linalg.norm(np.diff(path, axis=0), axis=1)
            cum = np.concatenate([[0.0], np.cumsum(seg)])
            speed = cmd.speed / 100.0
            d.plan = MotionPlan("curve", duration=max(config.DT, cum[-1] / speed),
                                reply_to=reply_to, path=path, path_cum=cum,
                                speed=speed)
            return None
        return protocol.Error(f"unsupported command {cmd!r}")

    def _body_to_world(self, x_cm, y_cm, z_cm):
        """Tello body frame: x forward, y left, z up."""
        fwd, right = _heading_vectors(self.drone.yaw)
        return (fwd * (x_cm / 100.0) - right * (y_cm / 100.0)
                + np.array([0.0, 0.0, z_cm / 100.0]))

    # -- telemetry -----------------------------------------------------------

    def answer_query(self, q: protocol.ReadQuery):
        d = self.drone
        if not d.sdk_mode:
            return protocol.Error("not in sdk mode")
        Q = protocol.ReadQuery
        if q is Q.BATTERY:
            return protocol.Value(q, int(round(d.battery)))
        if q is Q.SPEED:
            return protocol.Value(q, int(d.speed_setting))
        if q is Q.TIME:
            return protocol.Value(q, int(d.time_aloft))
        if q is Q.HEIGHT:
            return protocol.Value(q, int(round(d.z * 100.0)))
        if q is Q.TOF:
            return protocol.Value(q, max(config.TOF_FLOOR_CM, int(round(d.z * 100.0))))
        if q is Q.BARO:
            return protocol.Value(q, round(d.z, 2))
        if q is Q.TEMP:
            return protocol.Value(q, 55)
        if q is Q.ATTITUDE:
            yaw = int(round(wrap180(d.yaw)))
            if yaw == 180:
                yaw = -180
            return protocol.Value(q, (0, 0, yaw))
        if q is Q.ACCELERATION:
            return protocol.Value(q, (0, 0, 1000))
        if q is Q.WIFI:
            return protocol.Value(q, 90)
        return protocol.Error(f"unknown query {q}")

    # -- stepping ------------------------------------------------------------

    def step(self, dt: float = config.DT) -> list:
        """Advance one fixed timestep; returns completed deferred replies."""
        d = self.drone
        completions = []
        prev = (d.x, d.y, d.z)

        if d.plan is not None:
            completions.extend(self._advance_plan(dt))
        elif d.flying:
            self._rc_response(dt)

        if d.flying:
            dx, dy = self.vps_drift()
            d.x += dx
            d.y += dy
            d.time_aloft += dt
            d.battery = max(0.0, 100.0 - d.time_aloft / config.BATTERY_SECONDS_PER_PCT)
            hit = self.check_collision(prev)
            if hit is not None:
                if d.plan is not None and d.plan.reply_to is not None:
                    completions.append((d.plan.reply_to,
                                        protocol.Error("collision")))
                self._ground(fall=False)

        self.clock += dt
        return completions

    def _advance_plan(self, dt):
        d = self.drone
        p = d.plan
        p.elapsed += dt
        done = False
        if p.kind == "curve":
            dist = min(float(p.path_cum[-1]), p.speed * p.elapsed)
            pt = self._curve_point(p, dist)
            prev_pt = self._curve_point(p, p.prev_dist)
            inc = pt - prev_pt
            p.prev_dist = dist
            d.yaw_rate = 0.0
            done = dist >= float(p.path_cum[-1])
        else:
            frac = p.progress
            gain = frac - p.prev_frac
            inc = (p.delta if p.delta is not None else np.zeros(3)) * gain
            d.yaw += p.delta_yaw * gain
            d.yaw_rate = p.delta_yaw * gain / dt
            p.prev_frac = frac
            done = frac >= 1.0
        d.x += float(inc[0])
        d.y += float(inc[1])
        d.z += float(inc[2])
        d.vx, d.vy, d.vz = (float(v) for v in inc / dt)

        if not done:
            return []
        reply = p.reply_to
        kind = p.kind
        d.plan = None
        d.vx = d.vy = d.vz = d.yaw_rate = 0.0
        if kind == "takeoff":
            d.z = config.HOVER_ALTITUDE_M
            self.emit(events.TAKEOFF)
        elif kind == "land":
            d.z = 0.0
            d.flying = False
            payload = {}
            if self.course.goal is not None:
                dist = math.hypot(d.x - self.course.goal[0],
                                  d.y - self.course.goal[1])
                payload["distance_to_goal_cm"] = round(dist * 100.0, 1)
            self.emit(events.LANDED, payload)
        return [(reply, protocol.Ok())] if reply is not None else []

    @staticmethod
    def _curve_point(p, dist):
        i = int(np.searchsorted(p.path_cum, dist, side="right")) - 1
        i = min(max(i, 0), len(p.path_cum) - 2)
        seg = p.path_cum[i + 1] - p.path_cum[i]
        t = 0.0 if seg == 0 else (dist - p.path_cum[i]) / seg
        return p.path[i] * (1 - t) + p.path[i + 1] * t

    def _rc_response(self, dt):
        d = self.drone
        lr, fb, ud, yaw_ch = d.rc
        fwd, right = _heading_vectors(d.yaw)
        v_lr = lr / 100.0 * config.RC_HORIZ_MPS
        v_fb = fb / 100.0 * config.RC_HORIZ_MPS
        vt = v_lr * right + v_fb * fwd
        vt_z = ud / 100.0 * config.RC_VERT_MPS
        rt = yaw_ch / 100.0 * config.RC_YAW_DPS
        d.vx += (float(vt[0]) - d.vx) * _ALPHA
        d.vy += (float(vt[1]) - d.vy) * _ALPHA
        d.vz += (vt_z - d.vz) * _ALPHA
        d.yaw_rate += (rt - d.yaw_rate) * _ALPHA
        d.x += d.vx * dt
        d.y += d.vy * dt
        d.z += d.vz * dt
        d.yaw += d.yaw_rate * dt
        if d.z < config.MIN_FLIGHT_CLEARANCE_M:
            d.z = config.MIN_FLIGHT_CLEARANCE_M
            d.vz = 0.0

    # -- VPS -----------------------------------------------------------------

    def floor_variance(self) -> float:
        """Intensity variance of the ground patch under the drone."""
        patch = floor_patch(self.course, self.drone.x, self.drone.y)
        intensity = patch.astype(np.float64).mean(axis=2)
        return float(intensity.var())

    def vps_drift(self) -> tuple:
        """Per-step positioning drift; large over low-texture floors."""
        var = self.floor_variance()
        if var >= config.VPS_VARIANCE_THRESHOLD:
            sigma = config.VPS_SIGMA_LOCKED_M
            self.drone.vps_confidence = 1.0
        else:
            sigma = config.VPS_SIGMA_UNIFORM_M
            self.drone.vps_confidence = var / config.VPS_VARIANCE_THRESHOLD
        axis_sigma = sigma / math.sqrt(2.0)
        dx, dy = self.rng.normal(0.0, axis_sigma, 2)
        return float(dx), float(dy)

    # -- collisions ------------------------------------------------------------

    def check_collision(self, prev_pos):
        """Collision/ring-pass tests against rings, table, walls, ceiling.

        Emits RingPass/RingTouch for aperture crossings; returns the
        collision kind string if the drone made contact, else None.
        """
        d = self.drone
        r_drone = config.DRONE_RADIUS_M
        w, depth = self.course.field_size

        if d.x < r_drone or d.x > w - r_drone or d.y < r_drone or d.y > depth - r_drone:
            self.emit(events.COLLISION, {"kind": "wall"})
            return "wall"
        if d.z > config.CEILING_M - r_drone:
            self.emit(events.COLLISION, {"kind": "ceiling"})
            return "ceiling"

        for idx, ring in enumerate(self.course.rings):
            hit = self._ring_check(idx, ring, prev_pos)
            if hit:
                return hit

        t = self.course.table
        if t is not None:
            dx = max(abs(d.x - t.center[0]) - t.top_size[0] / 2.0, 0.0)
            dy = max(abs(d.y - t.center[1]) - t.top_size[1] / 2.0, 0.0)
            dz = max(d.z - t.height_m, 0.0)
            if math.sqrt(dx * dx + dy * dy + dz * dz) < r_drone:
                self.emit(events.COLLISION, {"kind": "table"})
                return "table"
        return None

    def _ring_check(self, idx, ring, prev_pos):
        d = self.drone
        r_drone = config.DRONE_RADIUS_M
        ar = math.radians(ring.axis_deg)
        ax, ay = math.sin(ar), math.cos(ar)
        cx, cy, ch = ring.center[0], ring.center[1], ring.center_height_m
        R = ring.diameter_m / 2.0

        def decompose(px, py, pz):
            axial = (px - cx) * ax + (py - cy) * ay
            hx = (px - cx) - axial * ax
            hy = (py - cy) - axial * ay
            rho = math.sqrt(hx * hx + hy * hy + (pz - ch) ** 2)
            return axial, rho

        axial, rho = decompose(d.x, d.y, d.z)
        dist_to_tube_circle = math.hypot(rho - R, axial)
        if dist_to_tube_circle <= ring.tube_radius_m + r_drone:
            self.emit(events.COLLISION, {"kind": "ring", "ring": idx})
            return "ring"

        axial_prev, _ = decompose(*prev_pos)
        if axial_prev * axial < 0.0:
            t = axial_prev / (axial_prev - axial)
            mx = prev_pos[0] + t * (d.x - prev_pos[0])
            my = prev_pos[1] + t * (d.y - prev_pos[1])
            mz = prev_pos[2] + t * (d.z - prev_pos[2])
            _, rho_mid = decompose(mx, my, mz)
            clear = R - ring.tube_radius_m - r_drone
            if rho_mid > clear:
                self.emit(events.COLLISION, {"kind": "ring", "ring": idx})
                return "ring"
            self.emit(events.RING_PASS, {"ring": idx})
            if rho_mid > clear - config.RING_TOUCH_CLEARANCE_M:
                self.emit(events.RING_TOUCH, {"ring": idx})
        return None

    # -- grounding -------------------------------------------------------------

    def _ground(self, fall: bool):
        d = self.drone
        d.flying = False
        d.z = 0.0
        d.vx = d.vy = d.vz = d.yaw_rate = 0.0
        d.rc = (0, 0, 0, 0)
        d.plan = None
        if fall:
            self.emit(events.FALL)

    # -- rendering helpers -------------------------------------------------------

    def camera_frame(self) -> np.ndarray:
        from ..arena.render import render_downward

        d = self.drone
        z = max(d.z, 0.05)  # landed drones still produce a near-ground view
        return render_downward(self.course, (d.x, d.y, z, d.yaw), self.camera)
