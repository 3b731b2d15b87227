"""Tello SDK 1.3 text protocol: typed commands, read queries, responses.

Wire text is ASCII, lowercase keywords, single-space separated, no
terminator. Everything here is pure and reentrant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union


class ProtocolError(ValueError):
    """Base for every parse/validation failure in this module."""


class UnknownCommand(ProtocolError):
    pass


class BadArity(ProtocolError):
    pass


class MalformedNumber(ProtocolError):
    pass


class OutOfRange(ProtocolError):
    def __init__(self, field, value, allowed):
        self.field = field
        self.value = value
        self.allowed = allowed
        super().__init__(f"{field}={value!r} not in {allowed}")


class PayloadTypeMismatch(ProtocolError):
    pass


class MissingExpectedQuery(ProtocolError):
    pass


MOVE_DIRECTIONS = ("up", "down", "left", "right", "forward", "back")
ROTATE_SENSES = ("cw", "ccw")
FLIP_DIRECTIONS = ("l", "r", "f", "b", "fl", "fr", "bl", "br")

_INT_RE = re.compile(r"^[+-]?[0-9]+$")
_FLOAT_RE = re.compile(r"^[+-]?[0-9]+(\.[0-9]+)?$")


def _check_range(field, value, lo, hi):
    if not lo <= value <= hi:
        raise OutOfRange(field, value, (lo, hi))


def _check_choice(field, value, allowed):
    if value not in allowed:
        raise OutOfRange(field, value, allowed)


def _check_waypoint(prefix, x, y, z):
    for name, v in ((f"{prefix}x", x), (f"{prefix}y", y), (f"{prefix}z", z)):
        _check_range(name, v, -500, 500)
    if max(abs(x), abs(y), abs(z)) < 20:
        raise OutOfRange(f"{prefix}xyz", (x, y, z), "at least one |coord| >= 20")


class ReadQuery(Enum):
    SPEED = "speed"
    BATTERY = "battery"
    TIME = "time"
    HEIGHT = "height"
    TEMP = "temp"
    ATTITUDE = "attitude"
    BARO = "baro"
    ACCELERATION = "acceleration"
    TOF = "tof"
    WIFI = "wifi"

    @property
    def wire(self) -> str:
        return self.value + "?"


# payload shape per query: "int", "float2" (two decimals), or "int3"
_PAYLOAD_SHAPE = {
    ReadQuery.SPEED: "int",
    ReadQuery.BATTERY: "int",
    ReadQuery.TIME: "int",
    ReadQuery.HEIGHT: "int",
    ReadQuery.TEMP: "int",
    ReadQuery.ATTITUDE: "int3",
    ReadQuery.BARO: "float2",
    ReadQuery.ACCELERATION: "int3",
    ReadQuery.TOF: "int",
    ReadQuery.WIFI: "int",
}

_QUERY_BY_WIRE = {q.wire: q for q in ReadQuery}


@dataclass(frozen=True)
class ModeEnter:
    pass


@dataclass(frozen=True)
class TakeOff:
    pass


@dataclass(frozen=True)
class Land:
    pass


@dataclass(frozen=True)
class StreamOn:
    pass


@dataclass(frozen=True)
class StreamOff:
    pass


@dataclass(frozen=True)
class Emergency:
    pass


@dataclass(frozen=True)
class Move:
    direction: str
    distance: int  # cm

    def __post_init__(self):
        _check_choice("direction", self.direction, MOVE_DIRECTIONS)
        _check_range("distance", self.distance, 20, 500)


@dataclass(frozen=True)
class Rotate:
    sense: str  # cw | ccw
    angle: int  # degrees

    def __post_init__(self):
        _check_choice("sense", self.sense, ROTATE_SENSES)
        _check_range("angle", self.angle, 1, 360)


@dataclass(frozen=True)
class Flip:
    direction: str

    def __post_init__(self):
        _check_choice("direction", self.direction, FLIP_DIRECTIONS)


@dataclass(frozen=True)
class Go:
    x: int
    y: int
    z: int
    speed: int

    def __post_init__(self):
        _check_waypoint("", self.x, self.y, self.z)
        _check_range("speed", self.speed, 10, 100)


@dataclass(frozen=True)
class Curve:
    x1: int
    y1: int
    z1: int
    x2: int
    y2: int
    z2: int
    speed: int

    def __post_init__(self):
        _check_waypoint("1:", self.x1, self.y1, self.z1)
        _check_waypoint("2:", self.x2, self.y2, self.z2)
        _check_range("speed", self.speed, 10, 100)


@dataclass(frozen=True)
class SetSpeed:
    speed: int  # cm/s

    def __post_init__(self):
        _check_range("speed", self.speed, 10, 100)


@dataclass(frozen=True)
class Rc:
    lr: int
    fb: int
    ud: int
    yaw: int

    def __post_init__(self):
        for name in ("lr", "fb", "ud", "yaw"):
            _check_range(name, getattr(self, name), -100, 100)


@dataclass(frozen=True)
class Wifi:
    ssid: str
    password: str

    def __post_init__(self):
        for name in ("ssid", "password"):
            v = getattr(self, name)
            if not v or any(c.isspace() for c in v):
                raise OutOfRange(name, v, "non-empty token without whitespace")


@dataclass(frozen=True)
class Read:
    query: ReadQuery


Command = Union[
    ModeEnter, TakeOff, Land, StreamOn, StreamOff, Emergency,
    Move, Rotate, Flip, Go, Curve, SetSpeed, Rc, Wifi, Read,
]

_BARE = {
    "command": ModeEnter,
    "takeoff": TakeOff,
    "land": Land,
    "streamon": StreamOn,
    "streamoff": StreamOff,
    "emergency": Emergency,
}

_VOCAB = (
    set(_BARE) | set(MOVE_DIRECTIONS) | set(ROTATE_SENSES)
    | {"flip", "go", "curve", "speed", "rc", "wifi"} | set(_QUERY_BY_WIRE)
)


def _int_token(tok: str, field: str) -> int:
    if not _INT_RE.match(tok):
        raise MalformedNumber(f"{field}: {tok!r} is not an integer")
    return int(tok)


def _want(tokens, n):
    if len(tokens) != n:
        raise BadArity(f"{tokens[0]!r} takes {n - 1} argument(s), got {len(tokens) - 1}")


def parse_command(line: str) -> Command:
    """Parse one wire line into a Command, enforcing all range invariants."""
    tokens = line.split()
    if not tokens:
        raise UnknownCommand("empty line")
    head = tokens[0]
    if head not in _VOCAB:
        raise UnknownCommand(f"unknown command {head!r}")

    if head in _BARE:
        _want(tokens, 1)
        return _BARE[head]()
    if head in _QUERY_BY_WIRE:
        _want(tokens, 1)
        return Read(_QUERY_BY_WIRE[head])
    if head in MOVE_DIRECTIONS:
        _want(tokens, 2)
        return Move(head, _int_token(tokens[1], "distance"))
    if head in ROTATE_SENSES:
        _want(tokens, 2)
        return Rotate(head, _int_token(tokens[1], "angle"))
    if head == "flip":
        _want(tokens, 2)
        return Flip(tokens[1])
    if head == "go":
        _want(tokens, 5)
        x, y, z, speed = (_int_token(t, f) for t, f in
                          zip(tokens[1:], ("x", "y", "z", "speed")))
        return Go(x, y, z, speed)
    if head == "curve":
        _want(tokens, 8)
        names = ("x1", "y1", "z1", "x2", "y2", "z2", "speed")
        vals = [_int_token(t, f) for t, f in zip(tokens[1:], names)]
        return Curve(*vals)
    if head == "speed":
        _want(tokens, 2)
        return SetSpeed(_int_token(tokens[1], "speed"))
    if head == "rc":
        _want(tokens, 5)
        vals = [_int_token(t, f) for t, f in
                zip(tokens[1:], ("lr", "fb", "ud", "yaw"))]
        return Rc(*vals)
    if head == "wifi":
        _want(tokens, 3)
        return Wifi(tokens[1], tokens[2])
    raise UnknownCommand(head)  # unreachable


def serialize_command(cmd: Command) -> str:
    """Canonical wire form; parse_command(serialize_command(c)) == c."""
    if isinstance(cmd, ModeEnter):
        return "command"
    if isinstance(cmd, TakeOff):
        return "takeoff"
    if isinstance(cmd, Land):
        return "land"
    if isinstance(cmd, StreamOn):
        return "streamon"
    if isinstance(cmd, StreamOff):
        return "streamoff"
    if isinstance(cmd, Emergency):
        return "emergency"
    if isinstance(cmd, Move):
        return f"{cmd.direction} {cmd.distance}"
    if isinstance(cmd, Rotate):
        return f"{cmd.sense} {cmd.angle}"
    if isinstance(cmd, Flip):
        return f"flip {cmd.direction}"
    if isinstance(cmd, Go):
        return f"go {cmd.x} {cmd.y} {cmd.z} {cmd.speed}"
    if isinstance(cmd, Curve):
        return (f"curve {cmd.x1} {cmd.y1} {cmd.z1} "
                f"{cmd.x2} {cmd.y2} {cmd.z2} {cmd.speed}")
    if isinstance(cmd, SetSpeed):
        return f"speed {cmd.speed}"
    if isinstance(cmd, Rc):
        return f"rc {cmd.lr} {cmd.fb} {cmd.ud} {cmd.yaw}"
    if isinstance(cmd, Wifi):
        return f"wifi {cmd.ssid} {cmd.password}"
    if isinstance(cmd, Read):
        return cmd.query.wire
    raise TypeError(f"not a Command: {cmd!r}")


@dataclass(frozen=True)
class Ok:
    pass


@dataclass(frozen=True)
class Error:
    message: str = ""


@dataclass(frozen=True)
class Value:
    query: ReadQuery
    payload: Union[int, float, tuple]

    def __post_init__(self):
        shape = _PAYLOAD_SHAPE[self.query]
        p = self.payload
        if shape == "int" and not isinstance(p, int):
            raise PayloadTypeMismatch(f"{self.query.name} payload must be int")
        if shape == "float2" and not isinstance(p, (int, float)):
            raise PayloadTypeMismatch(f"{self.query.name} payload must be a number")
        if shape == "int3" and not (
            isinstance(p, tuple) and len(p) == 3 and all(isinstance(v, int) for v in p)
        ):
            raise PayloadTypeMismatch(f"{self.query.name} payload must be 3 ints")


Response = Union[Ok, Error, Value]


def parse_response(line: str, expected: Optional[ReadQuery] = None) -> Response:
    """Parse a reply line; `expected` names the query a value line answers."""
    if line == "ok":
        return Ok()
    if line == "error" or line.startswith("error "):
        return Error(line[6:] if len(line) > 5 else "")
    if expected is None:
        raise MissingExpectedQuery(f"value line {line!r} without an expected query")
    shape = _PAYLOAD_SHAPE[expected]
    tokens = line.split()
    if shape == "int3":
        if len(tokens) != 3:
            raise PayloadTypeMismatch(f"{expected.name} expects 3 fields, got {line!r}")
        return Value(expected, tuple(_int_token(t, expected.name.lower()) for t in tokens))
    if len(tokens) != 1:
        raise PayloadTypeMismatch(f"{expected.name} expects 1 field, got {line!r}")
    if shape == "int":
        return Value(expected, _int_token(tokens[0], expected.name.lower()))
    if not _FLOAT_RE.match(tokens[0]):
        raise MalformedNumber(f"{expected.name}: {tokens[0]!r} is not a number")
    return Value(expected, float(tokens[0]))


def serialize_response(resp: Response) -> str:
    if isinstance(resp, Ok):
        return "ok"
    if isinstance(resp, Error):
        return f"error {resp.message}" if resp.message else "error"
    if isinstance(resp, Value):
        shape = _PAYLOAD_SHAPE[resp.query]
        if shape == "int3":
            return " ".join(str(v) for v in resp.payload)
        if shape == "float2":
            return f"{resp.payload:.2f}"
        return str(resp.payload)
    raise TypeError(f"not a Response: {resp!r}")
