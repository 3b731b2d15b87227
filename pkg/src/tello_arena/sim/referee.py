"""Truth-side referee: watches authoritative sim state after every step
and emits the simulator-truth events scoring relies on (line leaves,
verified behaviors, victim pickup, scripted phase checkpoints)."""

from __future__ import annotations

import math
from collections import deque

from .. import config, events
from ..arena.course import line_nearest
from ..scoring import CoverageTrace, build_coverage_trace


class Referee:
    def __init__(self, world, mission: str = "2023", checkpoints=None):
        self.world = world
        self.mission = mission
        self.checkpoints = list(checkpoints or [])
        self.samples = []            # (t, x, y, yaw) at 10 Hz while flying
        self._step = 0
        self._prev = None
        # line tracking
        self._line_active = False
        self._off_line = False
        # altitude behaviors (edge-triggered excursions)
        self._asc_in = False
        self._asc_travel = 0.0
        self._asc_emitted = False
        self._desc_armed = False
        self._desc_in = False
        self._desc_travel = 0.0
        self._desc_emitted = False
        # spins: (t, yaw) history at 10 Hz
        self._yaw_hist = deque()
        # victim
        self._victim_hold = 0.0
        self._victim_done = False
        # scripted checkpoints
        self._cp_idx = 0
        self._ev_cursor = len(world.events)
        self._ring_passes = {}

    # -- main hook ---------------------------------------------------------

    def observe(self):
        """Call once after every world.step()."""
        w = self.world
        d = w.drone
        prev = self._prev
        self._prev = (d.x, d.y, d.z)
        self._step += 1

        if self.checkpoints:
            self._check_checkpoints()

        if not d.flying:
            self._asc_in = False
            self._desc_in = False
            self._yaw_hist.clear()
            return

        if self._step % config.STEPS_PER_FRAME == 0:
            self.samples.append((w.clock, d.x, d.y, d.yaw))

        if self.mission != "2023":
            return

        travel = 0.0
        if prev is not None:
            travel = math.hypot(d.x - prev[0], d.y - prev[1])

        self._track_line(d)
        self._track_ascend(d, travel)
        self._track_descend(d, travel)
        self._track_spins(w.clock, d.yaw)
        self._track_victim(d)

    # -- detectors -----------------------------------------------------------

    def _track_line(self, d):
        course = self.world.course
        if course.line is None:
            return
        _, dist, _ = line_nearest(course, (d.x, d.y))
        if not self._line_active:
            if dist <= config.LINE_LEAVE_TOL_M:
                self._line_active = True
            return
        if self._off_line:
            if dist <= config.LINE_LEAVE_TOL_M:
                self._off_line = False
                self.world.emit(events.LINE_REGAIN)
        elif dist > config.LINE_LEAVE_TOL_M:
            self._off_line = True
            self.world.emit(events.LINE_LEAVE)

    def _track_ascend(self, d, travel):
        if d.z >= config.ASCEND_ALT_M:
            if not self._asc_in:
                self._asc_in = True
                self._asc_travel = 0.0
                self._asc_emitted = False
            else:
                self._asc_travel += travel
            if not self._asc_emitted and self._asc_travel >= config.BEHAVIOR_MIN_TRAVEL_M:
                self.world.emit(events.BEHAVIOR_COMPLETED, {"behavior": "AscendHigh"})
                self._asc_emitted = True
        else:
            self._asc_in = False

    def _track_descend(self, d, travel):
        if d.z >= config.DESCEND_ALT_M + 0.1:
            self._desc_armed = True
            self._desc_in = False
        elif d.z < config.DESCEND_ALT_M and self._desc_armed:
            if not self._desc_in:
                self._desc_in = True
                self._desc_travel = 0.0
                self._desc_emitted = False
            else:
                self._desc_travel += travel
            if not self._desc_emitted and self._desc_travel >= config.BEHAVIOR_MIN_TRAVEL_M:
                self.world.emit(events.BEHAVIOR_COMPLETED, {"behavior": "DescendLow"})
                self._desc_emitted = True

    def _track_spins(self, t, yaw):
        if self._step % config.STEPS_PER_FRAME != 0:
            return
        hist = self._yaw_hist
        hist.append((t, yaw))
        while hist and hist[0][0] < t - config.SPIN_WINDOW_S:
            hist.popleft()
        past = [y for _, y in hist]
        if max(past) - yaw >= config.SPIN_MIN_DEG:
            self.world.emit(events.BEHAVIOR_COMPLETED, {"behavior": "Spin360Left"})
            hist.clear()
            hist.append((t, yaw))
        elif yaw - min(past) >= config.SPIN_MIN_DEG:
            self.world.emit(events.BEHAVIOR_COMPLETED, {"behavior": "Spin360Right"})
            hist.clear()
            hist.append((t, yaw))

    def _track_victim(self, d):
        victim = self.world.course.victim
        if victim is None or self._victim_done:
            return
        near = (math.hypot(d.x - victim[0], d.y - victim[1])
                <= config.VICTIM_PICKUP_RADIUS_M
                and d.z <= config.VICTIM_PICKUP_ALT_M)
        self._victim_hold = self._victim_hold + config.DT if near else 0.0
        if self._victim_hold >= config.VICTIM_PICKUP_HOLD_S:
            self.world.emit(events.VICTIM_PICKUP)
            self._victim_done = True

    # -- scripted checkpoints ---------------------------------------------------

    def _check_checkpoints(self):
        w = self.world
        new = w.events[self._ev_cursor:]
        self._ev_cursor = len(w.events)
        for e in new:
            if e.kind == events.RING_PASS:
                ring = int(e.payload["ring"])
                self._ring_passes[ring] = self._ring_passes.get(ring, 0) + 1

        if self._cp_idx >= len(self.checkpoints):
            return
        cp = self.checkpoints[self._cp_idx]
        d = w.drone
        kind = cp["kind"]
        done = False
        if kind == "airborne":
            done = d.flying and d.z >= 0.5
        elif kind == "ring_pass":
            done = self._ring_passes.get(int(cp["ring"]), 0) > 0
        elif kind == "near":
            px, py, pz = cp["pos"]
            done = (math.sqrt((d.x - px) ** 2 + (d.y - py) ** 2
                              + (d.z - pz) ** 2) <= cp["radius"])
        elif kind == "landed_near":
            px, py = cp["pos"]
            done = (not d.flying
                    and math.hypot(d.x - px, d.y - py) <= cp["radius"])
        else:
            raise ValueError(f"unknown checkpoint kind {kind!r}")
        if done:
            w.emit(events.PHASE_COMPLETE, {"phase": self._cp_idx})
            self._cp_idx += 1
            self._ring_passes.clear()
            # the event cursor already consumed everything up to now

    # -- end of mission -----------------------------------------------------------

    def finalize(self) -> CoverageTrace | None:
        if self.mission == "2023" and self.samples:
            return build_coverage_trace(self.samples, self.world.course)
        return None
