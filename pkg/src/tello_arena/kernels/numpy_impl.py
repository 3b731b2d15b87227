"""Pure-numpy kernel fallbacks.

Same contracts as the numba implementations; selected when numba is
unavailable or TELLO_ARENA_KERNELS=numpy. Scalar math mirrors the jit
kernels expression for expression so both backends agree bit-for-bit.
"""

from __future__ import annotations

import numpy as np

# marker row: kind, r, g, b, then geometry
#   kind 0 rect:     cx, cy, hw, hh, cos, sin
#   kind 1 circle:   cx, cy, radius
#   kind 2 triangle: x0, y0, x1, y1, x2, y2 (counter-clockwise)
# patch row: kind, x0, y0, x1, y1, param, seed, ar, ag, ab, br, bg, bb
#   kind 0 checker (param = cell size m), kind 1 noise (param = amplitude)

NOISE_CELLS_PER_M = 50.0  # 2 cm noise grid
_M32 = 0xFFFFFFFF


def _noise_offset(ix, iy, seed):
    """Deterministic [-128, 127] hash of a noise cell; int64 in, int64 out."""
    h = (ix * 374761393) & _M32
    h ^= (iy * 668265263) & _M32
    h ^= (seed * 2246822519) & _M32
    h ^= h >> 13
    h = (h * 1274126177) & _M32
    h ^= h >> 16
    return (h & 0xFF) - 128


def floor_colors(xs, ys, field_w, field_d, base, segs, half_w, markers, patches,
                 outside):
    """Paint colors for flat point arrays xs, ys (metres).

    Priority per point: out-of-field gray, then markers (first listed wins),
    line black, texture patches (first listed wins), base color.
    """
    n = xs.shape[0]
    out = np.empty((n, 3), np.uint8)
    out[:] = base

    # patches, reverse order so the first listed wins
    for k in range(patches.shape[0] - 1, -1, -1):
        row = patches[k]
        inside = (xs >= row[1]) & (ys >= row[2]) & (xs < row[3]) & (ys < row[4])
        if not inside.any():
            continue
        if row[0] == 0.0:  # checker
            cell = row[5]
            ix = np.floor((xs[inside] - row[1]) / cell).astype(np.int64)
            iy = np.floor((ys[inside] - row[2]) / cell).astype(np.int64)
            even = (ix + iy) % 2 == 0
            colors = np.where(even[:, None], row[7:10], row[10:13])
            out[inside] = colors.astype(np.uint8)
        else:  # noise
            amp = np.int64(row[5])
            seed = np.int64(row[6])
            ix = np.floor(xs[inside] * NOISE_CELLS_PER_M).astype(np.int64)
            iy = np.floor(ys[inside] * NOISE_CELLS_PER_M).astype(np.int64)
            off = (_noise_offset(ix, iy, seed) * amp) // 128
            rgb = np.clip(row[7:10][None, :] + off[:, None], 0, 255)
            out[inside] = rgb.astype(np.uint8)

    # line
    if segs.shape[0] and half_w > 0.0:
        hw2 = half_w * half_w
        on_line = np.zeros(n, bool)
        for k in range(segs.shape[0]):
            ax, ay, bx, by = segs[k]
            dx = bx - ax
            dy = by - ay
            seg2 = dx * dx + dy * dy
            t = ((xs - ax) * dx + (ys - ay) * dy) / seg2
            t = np.minimum(np.maximum(t, 0.0), 1.0)
            px = ax + t * dx
            py = ay + t * dy
            d2 = (xs - px) * (xs - px) + (ys - py) * (ys - py)
            on_line |= d2 <= hw2
        out[on_line] = 0

    # markers, reverse order so the first listed wins
    for k in range(markers.shape[0] - 1, -1, -1):
        row = markers[k]
        kind = row[0]
        if kind == 0.0:
            dx = xs - row[4]
            dy = ys - row[5]
            u = row[8] * dx + row[9] * dy
            v = -row[9] * dx + row[8] * dy
            inside = (np.abs(u) <= row[6]) & (np.abs(v) <= row[7])
        elif kind == 1.0:
            dx = xs - row[4]
            dy = ys - row[5]
            inside = dx * dx + dy * dy <= row[6] * row[6]
        else:
            x0, y0, x1, y1, x2, y2 = row[4:10]
            e0 = (x1 - x0) * (ys - y0) - (y1 - y0) * (xs - x0)
            e1 = (x2 - x1) * (ys - y1) - (y2 - y1) * (xs - x1)
            e2 = (x0 - x2) * (ys - y2) - (y0 - y2) * (xs - x2)
            inside = (e0 >= 0.0) & (e1 >= 0.0) & (e2 >= 0.0)
        out[inside] = row[1:4].astype(np.uint8)

    off_field = (xs < 0.0) | (xs > field_w) | (ys < 0.0) | (ys > field_d)
    out[off_field] = outside
    return out


def hsv_in_range(rgb, hue_lo, hue_hi, s_lo, s_hi, v_lo, v_hi):
    """Boolean mask of pixels whose HSV lies in range (hue wraps if lo > hi)."""
    r = rgb[..., 0].astype(np.float64)
    g = rgb[..., 1].astype(np.float64)
    b = rgb[..., 2].astype(np.float64)
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    delta = maxc - minc
    v = maxc / 255.0
    s = np.where(maxc == 0.0, 0.0, delta / np.where(maxc == 0.0, 1.0, maxc))

    dsafe = np.where(delta == 0.0, 1.0, delta)
    hr = 60.0 * ((g - b) / dsafe)
    hr = np.where(hr < 0.0, hr + 360.0, hr)
    hg = 60.0 * ((b - r) / dsafe) + 120.0
    hb = 60.0 * ((r - g) / dsafe) + 240.0
    h = np.where(delta == 0.0, 0.0, np.where(maxc == r, hr, np.where(maxc == g, hg, hb)))

    ok = (s >= s_lo) & (s <= s_hi) & (v >= v_lo) & (v <= v_hi)
    if hue_lo <= hue_hi:
        ok &= (h >= hue_lo) & (h <= hue_hi)
    else:
        ok &= (h >= hue_lo) | (h <= hue_hi)
    return ok


def erode(mask, radius):
    """Square structuring element of side 2r+1; outside the image counts as 0."""
    m = np.asarray(mask, dtype=bool)
    padded = np.zeros((m.shape[0] + 2 * radius, m.shape[1] + 2 * radius), bool)
    padded[radius:-radius, radius:-radius] = m
    out = np.ones_like(m)
    h, w = m.shape
    for dy in range(2 * radius + 1):
        for dx in range(2 * radius + 1):
            out &= padded[dy:dy + h, dx:dx + w]
    return out


def dilate(mask, radius):
    m = np.asarray(mask, dtype=bool)
    padded = np.zeros((m.shape[0] + 2 * radius, m.shape[1] + 2 * radius), bool)
    padded[radius:-radius, radius:-radius] = m
    out = np.zeros_like(m)
    h, w = m.shape
    for dy in range(2 * radius + 1):
        for dx in range(2 * radius + 1):
            out |= padded[dy:dy + h, dx:dx + w]
    return out


_NB8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
_NB4 = ((-1, 0), (0, -1), (0, 1), (1, 0))


def label_components(mask, connectivity=8):
    """Connected labeling; labels 1..k in row-major discovery order."""
    m = np.asarray(mask, dtype=bool)
    h, w = m.shape
    nbrs = _NB8 if connectivity == 8 else _NB4
    labels = np.zeros((h, w), np.int32)
    count = 0
    for sy in range(h):
        row = m[sy]
        for sx in range(w):
            if not row[sx] or labels[sy, sx]:
                continue
            count += 1
            stack = [(sy, sx)]
            labels[sy, sx] = count
            while stack:
                y, x = stack.pop()
                for dy, dx in nbrs:
                    ny, nx = y + dy, x + dx
                    if 0 <= ny < h and 0 <= nx < w and m[ny, nx] and not labels[ny, nx]:
                        labels[ny, nx] = count
                        stack.append((ny, nx))
    return labels, count


# Moore neighborhood, clockwise starting west (image coordinates, y down)
_MOORE = ((0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1))


def trace_contour(mask, start_y, start_x):
    """Moore boundary trace from the region's topmost-leftmost pixel.

    `mask` must be false on its one-pixel border. Returns a (k, 2) int32
    array of (x, y) contour points forming a closed 8-connected loop.
    Stops when the trace departs the start pixel the same way twice.
    """
    m = np.asarray(mask, dtype=bool)
    points = [(start_x, start_y)]
    y, x = start_y, start_x
    b = 0  # search from the backtrack direction (west: known background)
    first_dir = -1
    max_iter = 8 * int(m.sum()) + 16
    for _ in range(max_iter):
        found = -1
        for i in range(8):
            idx = (b + i) % 8
            if m[y + _MOORE[idx][0], x + _MOORE[idx][1]]:
                found = idx
                break
        if found < 0:
            break  # isolated pixel
        if y == start_y and x == start_x:
            if first_dir < 0:
                first_dir = found
            elif found == first_dir:
                break
        y += _MOORE[found][0]
        x += _MOORE[found][1]
        b = (found + 5) % 8
        points.append((x, y))
    if len(points) > 1 and points[-1] == points[0]:
        points.pop()
    return np.array(points, np.int32)
