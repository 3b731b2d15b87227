"""Network face of the emulator: UDP command endpoint + TCP video stream.

A single loop owns the world; receiver threads only enqueue datagrams.
Replies go to each datagram's sender; deferred oks are sent on plan
completion. Video is TFRM-framed frames at 10 fps to every connected
client while streaming is on.
"""

from __future__ import annotations

import queue
import socket
import threading
import time

from .. import config, events, protocol
from .framing import encode_frame


class PortBindFailure(OSError):
    pass


class SimServer:
    def __init__(self, world, command_port=config.COMMAND_PORT,
                 video_port=config.VIDEO_PORT, fast=False, referee=None,
                 events_path=None):
        self.world = world
        self.fast = fast
        self.referee = referee
        self.events_path = events_path
        self._queue = queue.Queue()
        self._clients = []
        self._clients_lock = threading.Lock()
        self._stop = threading.Event()
        self._seq = 0
        self._steps = 0

        try:
            self.cmd_sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
            self.cmd_sock.bind(("", command_port))
            self.video_sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            self.video_sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            self.video_sock.bind(("", video_port))
            self.video_sock.listen(4)
        except OSError as e:
            raise PortBindFailure(str(e)) from None
        self.command_port = self.cmd_sock.getsockname()[1]
        self.video_port = self.video_sock.getsockname()[1]

        threading.Thread(target=self._recv_loop, daemon=True).start()
        threading.Thread(target=self._accept_loop, daemon=True).start()

    # -- receivers ----------------------------------------------------------

    def _recv_loop(self):
        while not self._stop.is_set():
            try:
                data, addr = self.cmd_sock.recvfrom(2048)
            except OSError:
                return
            self._queue.put((data, addr))

    def _accept_loop(self):
        while not self._stop.is_set():
            try:
                conn, _ = self.video_sock.accept()
            except OSError:
                return
            with self._clients_lock:
                self._clients.append(conn)

    # -- the loop -------------------------------------------------------------

    def run(self, max_sim_time=None):
        """Fixed-timestep loop; realtime paces to the wall clock."""
        t0 = time.monotonic()
        try:
            while not self._stop.is_set():
                if max_sim_time is not None and self.world.clock >= max_sim_time:
                    break
                self._drain_commands()
                for reply_to, resp in self.world.step():
                    self._reply(reply_to, resp)
                if self.referee is not None:
                    self.referee.observe()
                self._steps += 1
                if self._steps % config.STEPS_PER_FRAME == 0:
                    self._emit_frame()
                if not self.fast:
                    target = t0 + self._steps * config.DT
                    delay = target - time.monotonic()
                    if delay > 0:
                        time.sleep(delay)
        finally:
            self._flush_events()

    def _drain_commands(self):
        while True:
            try:
                data, addr = self._queue.get_nowait()
            except queue.Empty:
                return
            try:
                line = data.decode("ascii").strip()
                cmd = protocol.parse_command(line)
            except (UnicodeDecodeError, protocol.ProtocolError) as e:
                self._reply(addr, protocol.Error(_wire_reason(e)))
                continue
            resp = self.world.apply_command(cmd, reply_to=addr)
            if resp is not None:
                self._reply(addr, resp)

    def _reply(self, addr, resp):
        try:
            self.cmd_sock.sendto(
                protocol.serialize_response(resp).encode("ascii"), addr)
        except OSError:
            pass

    def _emit_frame(self):
        if not self.world.drone.stream_on:
            return
        with self._clients_lock:
            clients = list(self._clients)
        if not clients:
            return
        self._seq += 1
        data = encode_frame(self._seq, int(round(self.world.clock * 1000.0)),
                            self.world.camera_frame())
        dead = []
        for conn in clients:
            try:
                conn.sendall(data)
            except OSError:
                dead.append(conn)
        if dead:
            with self._clients_lock:
                for conn in dead:
                    if conn in self._clients:
                        self._clients.remove(conn)
                    conn.close()

    def _flush_events(self):
        if self.events_path:
            events.write_events(self.events_path, self.world.events)

    def shutdown(self):
        self._stop.set()
        for sock in (self.cmd_sock, self.video_sock):
            try:
                sock.close()
            except OSError:
                pass
        with self._clients_lock:
            for conn in self._clients:
                try:
                    conn.close()
                except OSError:
                    pass
            self._clients.clear()


def _wire_reason(e: Exception) -> str:
    name = type(e).__name__
    return f"{name}: {e}" if str(e) else name
