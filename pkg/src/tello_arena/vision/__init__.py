from .color import HsvRange, black_mask, classify_color, in_range, rgb_to_hsv
from .line import LineEstimate, estimate_line
from .morphology import morphology
from .regions import Region, connected_components
from .shapes import (
    DegenerateContour,
    ShapeReading,
    approx_polygon,
    classify_shape,
    contour_perimeter,
)
