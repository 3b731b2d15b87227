"""Competition course model: schema loading, validation, line queries.

Course documents are JSON. Positions and field sizes are metres; keys
ending in `_cm` are centimetres. Everything is normalized to metres
internally.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional


class CourseError(Exception):
    pass


class SchemaError(CourseError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class GeometryOutOfField(CourseError):
    pass


class DimensionMismatch(CourseError):
    pass


class NoLine(CourseError):
    pass


MARKER_SHAPES = ("rectangle", "circle", "triangle")
MARKER_COLORS = ("red", "blue", "green", "yellow")
LINE_SIDES = ("left", "right", "on-line")

PAINT = {
    "red": (255, 0, 0),
    "blue": (0, 0, 255),
    "green": (0, 255, 0),
    "yellow": (255, 255, 0),
}

# competition dimension table, centimetres
MARKER_DIMENSIONS_CM = {
    ("rectangle", "red"): (24.0, 12.0),
    ("rectangle", "blue"): (24.0, 12.0),
    ("circle", "red"): (20.0,),
    ("circle", "blue"): (20.0,),
    ("triangle", "red"): (15.0,),
    ("triangle", "blue"): (15.0,),
    ("circle", "green"): (40.0,),
    ("circle", "yellow"): (40.0,),
}

LINE_WIDTH_2023_CM = 5.0
FIELD_2023_M = (4.0, 4.0)
MARKER_MAX_LINE_DIST_M = 0.50
LINE_START_TOL_M = 0.20
RING_DIAMETER_M = 1.0
TABLE_HEIGHT_M = 0.70


@dataclass
class TexturePatch:
    rect: tuple  # (x, y, w, h) m
    kind: str    # "checker" | "noise"
    cell_m: float = 0.10
    colors: tuple = ((255, 255, 255), (200, 200, 200))
    seed: int = 0
    amplitude: int = 40
    color: tuple = (220, 220, 220)  # noise base


@dataclass
class LinePath:
    points: tuple  # ((x, y), ...) m
    width_m: float


@dataclass
class Marker:
    shape: str
    color: str
    center: tuple          # (x, y) m
    size_m: tuple          # rect (w, h); circle (d,); triangle (side,)
    line_side: str = "left"
    rotation_deg: float = 0.0

    def extent_m(self) -> float:
        """Circumscribed radius, for containment and overlap checks."""
        if self.shape == "rectangle":
            return math.hypot(self.size_m[0], self.size_m[1]) / 2
        if self.shape == "circle":
            return self.size_m[0] / 2
        return self.size_m[0] / math.sqrt(3)  # equilateral circumradius


@dataclass
class Ring:
    center: tuple          # (x, y) m
    diameter_m: float
    center_height_m: float
    tube_radius_m: float = 0.03
    axis_deg: float = 0.0  # azimuth of the pass-through axis, cw from +y


@dataclass
class Table:
    center: tuple
    top_size: tuple        # (w, d) m
    height_m: float


@dataclass
class CameraModel:
    horizontal_fov: float = 60.0
    resolution: tuple = (320, 240)
    orientation: str = "downward-via-mirror"

    def __post_init__(self):
        w, h = self.resolution
        if w < 16 or h < 16:
            raise SchemaError("camera.resolution", "resolution must be >= 16x16")
        if self.orientation not in ("downward-via-mirror", "forward"):
            raise SchemaError("camera.orientation", f"unknown {self.orientation!r}")


@dataclass
class CourseSpec:
    name: str
    field_size: tuple                 # (width, depth) m
    base_color: tuple = (255, 255, 255)
    patches: tuple = ()
    line: Optional[LinePath] = None
    markers: tuple = ()
    start_pad: tuple = (0.5, 0.5)
    victim: Optional[tuple] = None
    goal: Optional[tuple] = None
    rings: tuple = ()
    table: Optional[Table] = None
    profile: Optional[str] = None     # "2023" | "rings" | None
    _scene: object = field(default=None, repr=False, compare=False)

    def scene(self):
        """Compiled flat-array paint program, built lazily and cached."""
        if self._scene is None:
            from .scene import FloorScene

            self._scene = FloorScene.from_course(self)
        return self._scene


@dataclass
class Violation:
    rule: str
    subject: str
    message: str

    def __str__(self):
        return f"[{self.rule}] {self.subject}: {self.message}"


def _get(doc, key, path, required=True, default=None):
    if key not in doc:
        if required:
            raise SchemaError(f"{path}.{key}", "missing required key")
        return default
    return doc[key]


def _pair(value, path):
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) for v in value)):
        raise SchemaError(path, f"expected [x, y] numbers, got {value!r}")
    return (float(value[0]), float(value[1]))


def _rgb(value, path):
    if (not isinstance(value, (list, tuple)) or len(value) != 3
            or not all(isinstance(v, int) and 0 <= v <= 255 for v in value)):
        raise SchemaError(path, f"expected [r, g, b] 0..255, got {value!r}")
    return tuple(value)


def _marker_from_doc(doc, i):
    path = f"markers[{i}]"
    shape = _get(doc, "shape", path)
    if shape not in MARKER_SHAPES:
        raise SchemaError(f"{path}.shape", f"unknown shape {shape!r}")
    color = _get(doc, "color", path)
    if color not in MARKER_COLORS:
        raise SchemaError(f"{path}.color", f"unknown color {color!r}")
    center = _pair(_get(doc, "center", path), f"{path}.center")
    side = doc.get("line_side", "left")
    if side not in LINE_SIDES:
        raise SchemaError(f"{path}.line_side", f"unknown side {side!r}")
    rotation = float(doc.get("rotation_deg", 0.0))

    table_cm = MARKER_DIMENSIONS_CM.get((shape, color))
    if shape == "rectangle":
        size_cm = doc.get("size_cm", table_cm)
        if size_cm is None:
            raise SchemaError(f"{path}.size_cm", "rectangle needs size_cm [w, h]")
        size_cm = tuple(float(v) for v in size_cm)
    elif shape == "circle":
        d = doc.get("diameter_cm", table_cm[0] if table_cm else None)
        if d is None:
            raise SchemaError(f"{path}.diameter_cm", "circle needs diameter_cm")
        size_cm = (float(d),)
    else:
        a = doc.get("side_cm", table_cm[0] if table_cm else None)
        if a is None:
            raise SchemaError(f"{path}.side_cm", "triangle needs side_cm")
        size_cm = (float(a),)

    if table_cm is not None and size_cm != table_cm:
        raise DimensionMismatch(
            f"{path}: {color} {shape} must be {table_cm} cm, got {size_cm}"
        )
    size_m = tuple(v / 100.0 for v in size_cm)
    return Marker(shape, color, center, size_m, side, rotation)


def _patch_from_doc(doc, i):
    path = f"floor.patches[{i}]"
    rect = _get(doc, "rect", path)
    if not isinstance(rect, (list, tuple)) or len(rect) != 4:
        raise SchemaError(f"{path}.rect", "expected [x, y, w, h]")
    rect = tuple(float(v) for v in rect)
    pattern = _get(doc, "pattern", path)
    kind = _get(pattern, "kind", f"{path}.pattern")
    if kind == "checker":
        cell_cm = float(_get(pattern, "cell_cm", f"{path}.pattern"))
        colors = tuple(
            _rgb(c, f"{path}.pattern.colors[{j}]")
            for j, c in enumerate(_get(pattern, "colors", f"{path}.pattern"))
        )
        if len(colors) != 2:
            raise SchemaError(f"{path}.pattern.colors", "checker needs two colors")
        return TexturePatch(rect, "checker", cell_m=cell_cm / 100.0, colors=colors)
    if kind == "noise":
        return TexturePatch(
            rect,
            "noise",
            seed=int(_get(pattern, "seed", f"{path}.pattern")),
            amplitude=int(_get(pattern, "amplitude", f"{path}.pattern")),
            color=_rgb(pattern.get("color", [220, 220, 220]), f"{path}.pattern.color"),
        )
    raise SchemaError(f"{path}.pattern.kind", f"unknown pattern {kind!r}")


def load_course(source) -> CourseSpec:
    """Load and structurally validate a course document (path or dict)."""
    if isinstance(source, (str, Path)):
        try:
            doc = json.loads(Path(source).read_text())
        except json.JSONDecodeError as e:
            raise SchemaError("$", f"not valid JSON: {e}") from None
    else:
        doc = source
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")

    name = str(_get(doc, "name", "$", required=False, default="unnamed"))
    field_size = _pair(_get(doc, "field_size", "$"), "field_size")
    if field_size[0] <= 0 or field_size[1] <= 0:
        raise SchemaError("field_size", "must be positive")

    floor_doc = doc.get("floor", {})
    base = _rgb(floor_doc.get("base_color", [255, 255, 255]), "floor.base_color")
    patches = tuple(
        _patch_from_doc(p, i) for i, p in enumerate(floor_doc.get("patches", []))
    )

    line = None
    if "line" in doc and doc["line"] is not None:
        ldoc = doc["line"]
        pts = _get(ldoc, "points", "line")
        if not isinstance(pts, (list, tuple)) or len(pts) < 2:
            raise SchemaError("line.points", "need at least 2 points")
        points = tuple(_pair(p, f"line.points[{i}]") for i, p in enumerate(pts))
        width_cm = float(_get(ldoc, "width_cm", "line"))
        if width_cm <= 0:
            raise SchemaError("line.width_cm", "must be positive")
        line = LinePath(points, width_cm / 100.0)

    markers = tuple(
        _marker_from_doc(m, i) for i, m in enumerate(doc.get("markers", []))
    )

    rings = []
    for i, rdoc in enumerate(doc.get("rings", [])):
        path = f"rings[{i}]"
        rings.append(Ring(
            center=_pair(_get(rdoc, "center", path), f"{path}.center"),
            diameter_m=float(_get(rdoc, "diameter", path)),
            center_height_m=float(_get(rdoc, "center_height", path)),
            tube_radius_m=float(rdoc.get("tube_radius_cm", 3.0)) / 100.0,
            axis_deg=float(rdoc.get("axis_deg", 0.0)),
        ))

    table = None
    if "table" in doc and doc["table"] is not None:
        tdoc = doc["table"]
        table = Table(
            center=_pair(_get(tdoc, "center", "table"), "table.center"),
            top_size=_pair(_get(tdoc, "top_size", "table"), "table.top_size"),
            height_m=float(_get(tdoc, "height", "table")),
        )

    profile = doc.get("profile")
    if profile not in (None, "2023", "rings"):
        raise SchemaError("profile", f"unknown profile {profile!r}")

    course = CourseSpec(
        name=name,
        field_size=field_size,
        base_color=base,
        patches=patches,
        line=line,
        markers=markers,
        start_pad=_pair(_get(doc, "start_pad", "$"), "start_pad"),
        victim=_pair(doc["victim"], "victim") if doc.get("victim") else None,
        goal=_pair(doc["goal"], "goal") if doc.get("goal") else None,
        rings=tuple(rings),
        table=table,
        profile=profile,
    )

    for v in validate_course(course):
        if v.rule == "OutOfField":
            raise GeometryOutOfField(str(v))
    return course


def validate_course(course: CourseSpec) -> list:
    """All invariant violations as data; empty list means fully valid."""
    out = []
    w, d = course.field_size

    def check_inside(x, y, margin, subject):
        if not (margin <= x <= w - margin and margin <= y <= d - margin):
            out.append(Violation("OutOfField", subject,
                                 f"({x:.3f}, {y:.3f}) with extent {margin:.3f} "
                                 f"outside {w}x{d} field"))

    check_inside(*course.start_pad, 0.0, "start_pad")
    if course.victim:
        check_inside(*course.victim, 0.0, "victim")
    if course.goal:
        check_inside(*course.goal, 0.0, "goal")
    if course.line:
        for i, (x, y) in enumerate(course.line.points):
            check_inside(x, y, course.line.width_m / 2, f"line.points[{i}]")
        if len(course.line.points) < 2:
            out.append(Violation("LinePointsRule", "line", "needs >= 2 points"))
        sx, sy = course.line.points[0]
        px, py = course.start_pad
        if math.hypot(sx - px, sy - py) > LINE_START_TOL_M:
            out.append(Violation("LineStartRule", "line",
                                 f"line starts {math.hypot(sx - px, sy - py):.2f} m "
                                 f"from start_pad (max {LINE_START_TOL_M})"))
    for i, p in enumerate(course.patches):
        x, y, pw, ph = p.rect
        if not (0 <= x and 0 <= y and x + pw <= w and y + ph <= d):
            out.append(Violation("OutOfField", f"floor.patches[{i}]",
                                 "patch rect outside field"))
    for i, m in enumerate(course.markers):
        subject = f"markers[{i}] ({m.color} {m.shape})"
        check_inside(m.center[0], m.center[1], m.extent_m(), subject)
        table_cm = MARKER_DIMENSIONS_CM.get((m.shape, m.color))
        if table_cm is not None:
            size_cm = tuple(round(v * 100.0, 6) for v in m.size_m)
            if size_cm != table_cm:
                out.append(Violation("DimensionRule", subject,
                                     f"must be {table_cm} cm, got {size_cm}"))
        if course.line is not None and m.color not in ("green", "yellow"):
            _, dist, _ = line_nearest(course, m.center)
            if dist > MARKER_MAX_LINE_DIST_M:
                out.append(Violation("TooFarFromLine", subject,
                                     f"{dist:.2f} m from line "
                                     f"(max {MARKER_MAX_LINE_DIST_M})"))
            if dist < m.extent_m() + course.line.width_m / 2:
                out.append(Violation("MarkerOverlapsLine", subject,
                                     "marker paint would overlap the line"))
    for i, r in enumerate(course.rings):
        check_inside(r.center[0], r.center[1], r.diameter_m / 2, f"rings[{i}]")
        if r.center_height_m - r.diameter_m / 2 < -1e-9:
            out.append(Violation("RingHeightRule", f"rings[{i}]",
                                 "ring bottom below the floor"))
    if course.table:
        tx, ty = course.table.center
        check_inside(tx, ty, max(course.table.top_size) / 2, "table")

    if course.profile == "2023":
        if course.field_size != FIELD_2023_M:
            out.append(Violation("FieldSizeRule", "field_size",
                                 f"2023 profile needs {FIELD_2023_M}"))
        if course.line is None:
            out.append(Violation("LineWidthRule", "line", "2023 profile needs a line"))
        elif round(course.line.width_m * 100.0, 6) != LINE_WIDTH_2023_CM:
            out.append(Violation("LineWidthRule", "line",
                                 f"2023 line width must be {LINE_WIDTH_2023_CM} cm"))
        if course.victim is not None:
            if not _has_circle_at(course, "green", course.victim):
                out.append(Violation("VictimCircleRule", "victim",
                                     "no green d=40 circle centered on victim"))
        if course.goal is not None:
            if not _has_circle_at(course, "yellow", course.goal):
                out.append(Violation("GoalCircleRule", "goal",
                                     "no yellow d=40 circle centered on goal"))
    if course.profile == "rings":
        for i, r in enumerate(course.rings):
            if abs(r.diameter_m - RING_DIAMETER_M) > 1e-9:
                out.append(Violation("RingDiameterRule", f"rings[{i}]",
                                     f"ring diameter must be {RING_DIAMETER_M} m"))
        if course.table is not None and abs(course.table.height_m - TABLE_HEIGHT_M) > 1e-9:
            out.append(Violation("TableHeightRule", "table",
                                 f"table height must be {TABLE_HEIGHT_M} m"))
    return out


def _has_circle_at(course, color, pos):
    for m in course.markers:
        if (m.shape == "circle" and m.color == color
                and math.hypot(m.center[0] - pos[0], m.center[1] - pos[1]) < 1e-6
                and abs(m.size_m[0] - 0.40) < 1e-9):
            return True
    return False


def line_nearest(course: CourseSpec, p) -> tuple:
    """Closest point on the polyline: (arclength m, distance m, tangent deg).

    Tangent is the containing segment's heading, clockwise from +y like
    the drone's yaw.
    """
    if course.line is None:
        raise NoLine(f"course {course.name!r} has no line")
    px, py = p
    pts = course.line.points
    best = None
    acc = 0.0
    for (ax, ay), (bx, by) in zip(pts[:-1], pts[1:]):
        dx, dy = bx - ax, by - ay
        seg_len = math.hypot(dx, dy)
        if seg_len == 0.0:
            continue
        t = ((px - ax) * dx + (py - ay) * dy) / (seg_len * seg_len)
        t = min(max(t, 0.0), 1.0)
        qx, qy = ax + t * dx, ay + t * dy
        dist = math.hypot(px - qx, py - qy)
        if best is None or dist < best[1]:
            tangent = math.degrees(math.atan2(dx, dy))
            best = (acc + t * seg_len, dist, tangent)
        acc += seg_len
    if best is None:
        raise NoLine("line has no extent")
    return best


def line_length(course: CourseSpec) -> float:
    if course.line is None:
        raise NoLine(f"course {course.name!r} has no line")
    pts = course.line.points
    return sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(pts[:-1], pts[1:]))
