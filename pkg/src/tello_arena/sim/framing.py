"""TFRM video framing: length-delimited uncompressed RGB frames.

Record layout, big-endian: magic "TFRM" (4 bytes), seq u32, t_ms u64,
width u16, height u16, then width*height*3 RGB bytes. Used for the
video stream and for recording files.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"TFRM"
_HEADER = struct.Struct(">4sIQHH")
HEADER_SIZE = _HEADER.size


class TruncatedStream(ValueError):
    pass


class BadMagic(ValueError):
    pass


def encode_frame(seq: int, t_ms: int, frame: np.ndarray) -> bytes:
    frame = np.ascontiguousarray(frame, dtype=np.uint8)
    h, w, _ = frame.shape
    return _HEADER.pack(MAGIC, seq & 0xFFFFFFFF, t_ms, w, h) + frame.tobytes()


class FrameDecoder:
    """Incremental decoder for a TFRM byte stream."""

    def __init__(self):
        self._buf = bytearray()

    def feed(self, data: bytes) -> list:
        """Returns all (seq, t_ms, frame) records completed by this chunk."""
        self._buf.extend(data)
        out = []
        while True:
            if len(self._buf) < HEADER_SIZE:
                break
            magic, seq, t_ms, w, h = _HEADER.unpack(bytes(self._buf[:HEADER_SIZE]))
            if magic != MAGIC:
                raise BadMagic(f"expected {MAGIC!r}, got {magic!r}")
            need = HEADER_SIZE + w * h * 3
            if len(self._buf) < need:
                break
            raw = bytes(self._buf[HEADER_SIZE:need])
            del self._buf[:need]
            out.append((seq, t_ms,
                        np.frombuffer(raw, np.uint8).reshape(h, w, 3).copy()))
        return out

    @property
    def pending_bytes(self) -> int:
        return len(self._buf)


def read_frames(path):
    """Iterate (seq, t_ms, frame) records; raises TruncatedStream at a
    partial trailing record (after yielding all complete ones)."""
    with open(path, "rb") as f:
        data = f.read()
    dec = FrameDecoder()
    for rec in dec.feed(data):
        yield rec
    if dec.pending_bytes:
        raise TruncatedStream(f"{dec.pending_bytes} trailing bytes")
