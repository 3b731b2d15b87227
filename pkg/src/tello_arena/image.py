"""Frame/mask carriers and PPM/PGM file IO.

A frame is a (h, w, 3) uint8 numpy array, row-major RGB. A mask is a
(h, w) bool array of the same shape as its source frame.
"""

from __future__ import annotations

import numpy as np


class ImageFormatError(ValueError):
    pass


def write_ppm(path, frame: np.ndarray) -> None:
    """Binary PPM (P6), 8-bit RGB."""
    frame = np.ascontiguousarray(frame, dtype=np.uint8)
    h, w, c = frame.shape
    if c != 3:
        raise ImageFormatError("frame must be (h, w, 3)")
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(frame.tobytes())


def read_ppm(path) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    magic, w, h, maxval, offset = _parse_header(data, b"P6")
    n = w * h * 3
    raw = data[offset:offset + n]
    if len(raw) != n:
        raise ImageFormatError(f"truncated PPM: wanted {n} bytes, got {len(raw)}")
    return np.frombuffer(raw, dtype=np.uint8).reshape(h, w, 3).copy()


def write_pgm(path, mask: np.ndarray) -> None:
    """Binary PGM (P5); mask written as 0/255."""
    data = (np.asarray(mask, dtype=bool).astype(np.uint8) * 255)
    h, w = data.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(data.tobytes())


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    magic, w, h, maxval, offset = _parse_header(data, b"P5")
    n = w * h
    raw = data[offset:offset + n]
    if len(raw) != n:
        raise ImageFormatError(f"truncated PGM: wanted {n} bytes, got {len(raw)}")
    return (np.frombuffer(raw, dtype=np.uint8).reshape(h, w) >= 128)


def _parse_header(data: bytes, magic: bytes):
    if not data.startswith(magic):
        raise ImageFormatError(f"bad magic, expected {magic.decode()}")
    fields = []
    i = len(magic)
    while len(fields) < 3:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if data[i:i + 1] == b"#":           # comment line
            while i < len(data) and data[i] != 0x0A:
                i += 1
            continue
        j = i
        while j < len(data) and not data[j:j + 1].isspace():
            j += 1
        if j == i:
            raise ImageFormatError("truncated header")
        fields.append(int(data[i:j]))
        i = j
    i += 1  # single whitespace after maxval
    w, h, maxval = fields
    if maxval != 255:
        raise ImageFormatError("only 8-bit images supported")
    return magic, w, h, maxval, i
