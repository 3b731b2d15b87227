from .course import (
    CameraModel,
    CourseSpec,
    DimensionMismatch,
    GeometryOutOfField,
    LinePath,
    Marker,
    NoLine,
    Ring,
    SchemaError,
    Table,
    TexturePatch,
    Violation,
    line_nearest,
    load_course,
    validate_course,
)
from .render import (
    NonPositiveAltitude,
    OutOfField,
    course_preview,
    default_camera,
    floor_patch,
    footprint_width,
    render_downward,
    sample_floor,
)
