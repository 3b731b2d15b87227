"""HSV conversion and color thresholding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import config, kernels


def rgb_to_hsv(r: int, g: int, b: int) -> tuple:
    """Hexcone conversion of one RGB8 pixel to (h degrees, s, v in [0,1]).

    Hue is undefined for gray pixels (s == 0) and reported as 0.
    """
    rf, gf, bf = float(r), float(g), float(b)
    maxc = max(rf, gf, bf)
    minc = min(rf, gf, bf)
    delta = maxc - minc
    v = maxc / 255.0
    s = 0.0 if maxc == 0.0 else delta / maxc
    if delta == 0.0:
        h = 0.0
    elif maxc == rf:
        h = 60.0 * ((gf - bf) / delta)
        if h < 0.0:
            h += 360.0
    elif maxc == gf:
        h = 60.0 * ((bf - rf) / delta) + 120.0
    else:
        h = 60.0 * ((rf - gf) / delta) + 240.0
    return h, s, v


def hsv_to_rgb(h: float, s: float, v: float) -> tuple:
    """Standard inverse hexcone, for round-trip checks."""
    c = v * s
    hp = (h % 360.0) / 60.0
    x = c * (1.0 - abs(hp % 2.0 - 1.0))
    sector = int(hp)
    r1, g1, b1 = (
        (c, x, 0.0), (x, c, 0.0), (0.0, c, x),
        (0.0, x, c), (x, 0.0, c), (c, 0.0, x),
    )[min(sector, 5)]
    m = v - c
    return tuple(int(round((u + m) * 255.0)) for u in (r1, g1, b1))


@dataclass(frozen=True)
class HsvRange:
    """Hue wraps through 0 when hue_lo > hue_hi (red uses 340..20)."""

    hue_lo: float
    hue_hi: float
    sat_lo: float = 0.0
    sat_hi: float = 1.0
    val_lo: float = 0.0
    val_hi: float = 1.0

    def __post_init__(self):
        if self.sat_lo > self.sat_hi:
            raise ValueError("empty saturation interval")
        if self.val_lo > self.val_hi:
            raise ValueError("empty value interval")

    def contains(self, h: float, s: float, v: float) -> bool:
        if not (self.sat_lo <= s <= self.sat_hi and self.val_lo <= v <= self.val_hi):
            return False
        if self.hue_lo <= self.hue_hi:
            return self.hue_lo <= h <= self.hue_hi
        return h >= self.hue_lo or h <= self.hue_hi


COMPETITION_RANGES = {
    name: HsvRange(*params) for name, params in config.HSV_RANGES.items()
}
BLACK_RANGE = HsvRange(0.0, 360.0, 0.0, 1.0, 0.0, config.BLACK_V_MAX)


def in_range(frame: np.ndarray, rng: HsvRange) -> np.ndarray:
    """Boolean mask of pixels whose HSV lies in `rng`."""
    return kernels.hsv_in_range(
        np.ascontiguousarray(frame, dtype=np.uint8),
        rng.hue_lo, rng.hue_hi, rng.sat_lo, rng.sat_hi, rng.val_lo, rng.val_hi,
    )


def black_mask(frame: np.ndarray) -> np.ndarray:
    """Threshold for the black competition line."""
    return in_range(frame, BLACK_RANGE)


def classify_color(r: float, g: float, b: float) -> str:
    """Competition color name for a mean interior RGB, or "other"."""
    h, s, v = rgb_to_hsv(int(round(r)), int(round(g)), int(round(b)))
    for name, rng in COMPETITION_RANGES.items():
        if rng.contains(h, s, v):
            return name
    return "other"
