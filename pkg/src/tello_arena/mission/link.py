"""Drone links: how the mission client reaches a drone.

Both links speak wire text through the protocol module, so the
controller is identical whether it flies over real sockets (UdpLink)
or in-process against a virtual clock (DirectLink, fast mode).
"""

from __future__ import annotations

import queue
import socket
import threading
import time
from collections import deque

from .. import config, protocol
from ..sim.framing import FrameDecoder

_DEFERRED_HEADS = {
    "takeoff", "land", "flip", "go", "curve",
    "up", "down", "left", "right", "forward", "back", "cw", "ccw",
}


def is_deferred(line: str) -> bool:
    head = line.split()[0] if line.split() else ""
    return head in _DEFERRED_HEADS


class DirectLink:
    """In-process link driving the simulation's virtual clock."""

    def __init__(self, world, referee=None):
        self.world = world
        self.referee = referee
        self._pending = False
        self._deferred = None
        self._frames = deque()
        self._latest = None
        self._seq = 0
        self._steps = 0

    @property
    def now(self) -> float:
        return self.world.clock

    def send_line(self, line: str):
        cmd = protocol.parse_command(line)
        resp = self.world.apply_command(cmd, reply_to="link")
        if resp is None:
            self._pending = True
            return None
        return protocol.serialize_response(resp)

    def query(self, q: protocol.ReadQuery):
        reply = self.send_line(q.wire)
        parsed = protocol.parse_response(reply, q)
        if isinstance(parsed, protocol.Error):
            raise RuntimeError(f"query {q.wire} failed: {parsed.message}")
        return parsed.payload

    def poll_deferred(self):
        r = self._deferred
        self._deferred = None
        return r

    @property
    def pending(self) -> bool:
        return self._pending

    def advance(self, steps: int = config.STEPS_PER_FRAME):
        """Step the simulation, collecting deferred replies and frames."""
        for _ in range(steps):
            for _reply_to, resp in self.world.step():
                self._deferred = protocol.serialize_response(resp)
                self._pending = False
            if self.referee is not None:
                self.referee.observe()
            self._steps += 1
            if (self._steps % config.STEPS_PER_FRAME == 0
                    and self.world.drone.stream_on):
                self._seq += 1
                rec = (self._seq, int(round(self.world.clock * 1000.0)),
                       self.world.camera_frame())
                self._frames.append(rec)
                self._latest = rec

    def wait_deferred(self, timeout_s: float = 60.0):
        """Crank the clock until the outstanding deferred reply lands."""
        for _ in range(int(timeout_s / config.DT)):
            if self._deferred is not None or not self._pending:
                break
            self.advance(1)
        return self.poll_deferred()

    def latest_frame(self):
        return self._latest

    def drain_frames(self) -> list:
        out = list(self._frames)
        self._frames.clear()
        return out

    def close(self):
        pass


class UdpLink:
    """Realtime link over the emulator's UDP command / TCP video ports.

    Commands are lockstep: every immediate command waits for its reply.
    The single outstanding motion command's deferred ok is routed by
    elimination ("ok" while a value reply is awaited, or any reply
    arriving while nothing waits).
    """

    def __init__(self, host="127.0.0.1", command_port=config.COMMAND_PORT,
                 video_port=config.VIDEO_PORT, timeout=5.0):
        self.addr = (host, command_port)
        self.video_addr = (host, video_port)
        self.timeout = timeout
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.sock.bind(("", 0))
        self._inbox = queue.Queue()
        self._pending = False
        self._deferred = None
        self._lock = threading.Lock()
        self._t0 = time.monotonic()
        self._closing = False
        self._frames = deque()
        self._latest = None
        self._frames_lock = threading.Lock()
        self._video_sock = None
        self._rx = threading.Thread(target=self._reader, daemon=True)
        self._rx.start()

    @property
    def now(self) -> float:
        return time.monotonic() - self._t0

    def _reader(self):
        while not self._closing:
            try:
                data, _ = self.sock.recvfrom(2048)
            except OSError:
                return
            self._inbox.put(data.decode("ascii", "replace").strip())

    def send_line(self, line: str):
        with self._lock:
            expect_value = line.endswith("?")
            deferred = is_deferred(line)
            self.sock.sendto(line.encode("ascii"), self.addr)
            if deferred:
                self._pending = True
                return None
            deadline = time.monotonic() + self.timeout
            while True:
                remain = deadline - time.monotonic()
                if remain <= 0:
                    raise TimeoutError(f"no reply to {line!r}")
                try:
                    reply = self._inbox.get(timeout=remain)
                except queue.Empty:
                    continue
                if expect_value and self._pending and reply in ("ok",) :
                    # the outstanding motion finished while we awaited a value
                    self._deferred = reply
                    self._pending = False
                    continue
                return reply

    def query(self, q: protocol.ReadQuery):
        reply = self.send_line(q.wire)
        parsed = protocol.parse_response(reply, q)
        if isinstance(parsed, protocol.Error):
            raise RuntimeError(f"query {q.wire} failed: {parsed.message}")
        return parsed.payload

    def poll_deferred(self):
        if self._deferred is None and self._pending:
            try:
                reply = self._inbox.get_nowait()
                self._deferred = reply
                self._pending = False
            except queue.Empty:
                pass
        r = self._deferred
        self._deferred = None
        return r

    @property
    def pending(self) -> bool:
        return self._pending

    def advance(self, steps: int = config.STEPS_PER_FRAME):
        """Realtime link: the world advances on its own; just pace."""
        time.sleep(steps * config.DT)

    def wait_deferred(self, timeout_s: float = 60.0):
        deadline = time.monotonic() + timeout_s
        while time.monotonic() < deadline:
            r = self.poll_deferred()
            if r is not None:
                return r
            time.sleep(0.01)
        raise TimeoutError("deferred reply never arrived")

    def connect_video(self):
        self._video_sock = socket.create_connection(self.video_addr, self.timeout)
        t = threading.Thread(target=self._video_reader, daemon=True)
        t.start()

    def _video_reader(self):
        dec = FrameDecoder()
        sock = self._video_sock
        while not self._closing:
            try:
                data = sock.recv(65536)
            except OSError:
                return
            if not data:
                return
            for rec in dec.feed(data):
                with self._frames_lock:
                    self._frames.append(rec)
                    self._latest = rec

    def latest_frame(self):
        with self._frames_lock:
            return self._latest

    def drain_frames(self) -> list:
        with self._frames_lock:
            out = list(self._frames)
            self._frames.clear()
            return out

    def close(self):
        self._closing = True
        try:
            self.sock.close()
        except OSError:
            pass
        if self._video_sock is not None:
            try:
                self._video_sock.close()
            except OSError:
                pass
