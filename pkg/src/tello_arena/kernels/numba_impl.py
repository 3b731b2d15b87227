"""Numba jit kernels; must agree with numpy_impl result-for-result.

Scalar expressions here mirror numpy_impl line by line: both paths run
the same IEEE operations in the same order, so the backends are
interchangeable without changing rendered pixels or masks.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NOISE_CELLS_PER_M = 50.0
_M32 = 0xFFFFFFFF

_MOORE = np.array(
    [(0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1)],
    dtype=np.int64,
)


@njit(cache=True)
def _noise_offset(ix, iy, seed):
    h = (ix * 374761393) & _M32
    h ^= (iy * 668265263) & _M32
    h ^= (seed * 2246822519) & _M32
    h ^= h >> 13
    h = (h * 1274126177) & _M32
    h ^= h >> 16
    return (h & 0xFF) - 128


@njit(cache=True)
def _point_color(x, y, base, segs, half_w, markers, patches):
    # markers first (first listed wins)
    for k in range(markers.shape[0]):
        row = markers[k]
        kind = row[0]
        if kind == 0.0:
            dx = x - row[4]
            dy = y - row[5]
            u = row[8] * dx + row[9] * dy
            v = -row[9] * dx + row[8] * dy
            if abs(u) <= row[6] and abs(v) <= row[7]:
                return np.uint8(row[1]), np.uint8(row[2]), np.uint8(row[3])
        elif kind == 1.0:
            dx = x - row[4]
            dy = y - row[5]
            if dx * dx + dy * dy <= row[6] * row[6]:
                return np.uint8(row[1]), np.uint8(row[2]), np.uint8(row[3])
        else:
            x0, y0, x1, y1 = row[4], row[5], row[6], row[7]
            x2, y2 = row[8], row[9]
            e0 = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)
            e1 = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
            e2 = (x0 - x2) * (y - y2) - (y0 - y2) * (x - x2)
            if e0 >= 0.0 and e1 >= 0.0 and e2 >= 0.0:
                return np.uint8(row[1]), np.uint8(row[2]), np.uint8(row[3])

    # line
    if segs.shape[0] > 0 and half_w > 0.0:
        hw2 = half_w * half_w
        for k in range(segs.shape[0]):
            ax = segs[k, 0]
            ay = segs[k, 1]
            dx = segs[k, 2] - ax
            dy = segs[k, 3] - ay
            seg2 = dx * dx + dy * dy
            t = ((x - ax) * dx + (y - ay) * dy) / seg2
            t = min(max(t, 0.0), 1.0)
            px = ax + t * dx
            py = ay + t * dy
            d2 = (x - px) * (x - px) + (y - py) * (y - py)
            if d2 <= hw2:
                return np.uint8(0), np.uint8(0), np.uint8(0)

    # texture patches (first listed wins)
    for k in range(patches.shape[0]):
        row = patches[k]
        if x >= row[1] and y >= row[2] and x < row[3] and y < row[4]:
            if row[0] == 0.0:  # checker
                cell = row[5]
                ix = np.int64(np.floor((x - row[1]) / cell))
                iy = np.int64(np.floor((y - row[2]) / cell))
                if (ix + iy) % 2 == 0:
                    return np.uint8(row[7]), np.uint8(row[8]), np.uint8(row[9])
                return np.uint8(row[10]), np.uint8(row[11]), np.uint8(row[12])
            amp = np.int64(row[5])
            seed = np.int64(row[6])
            ix = np.int64(np.floor(x * NOISE_CELLS_PER_M))
            iy = np.int64(np.floor(y * NOISE_CELLS_PER_M))
            off = (_noise_offset(ix, iy, seed) * amp) // 128
            r = min(max(row[7] + off, 0.0), 255.0)
            g = min(max(row[8] + off, 0.0), 255.0)
            b = min(max(row[9] + off, 0.0), 255.0)
            return np.uint8(r), np.uint8(g), np.uint8(b)

    return base[0], base[1], base[2]


@njit(cache=True)
def floor_colors(xs, ys, field_w, field_d, base, segs, half_w, markers, patches,
                 outside):
    n = xs.shape[0]
    out = np.empty((n, 3), np.uint8)
    for i in range(n):
        x = xs[i]
        y = ys[i]
        if x < 0.0 or x > field_w or y < 0.0 or y > field_d:
            out[i, 0] = outside[0]
            out[i, 1] = outside[1]
            out[i, 2] = outside[2]
        else:
            r, g, b = _point_color(x, y, base, segs, half_w, markers, patches)
            out[i, 0] = r
            out[i, 1] = g
            out[i, 2] = b
    return out


@njit(cache=True)
def hsv_in_range(rgb, hue_lo, hue_hi, s_lo, s_hi, v_lo, v_hi):
    h_px, w_px = rgb.shape[0], rgb.shape[1]
    out = np.zeros((h_px, w_px), np.bool_)
    for j in range(h_px):
        for i in range(w_px):
            r = np.float64(rgb[j, i, 0])
            g = np.float64(rgb[j, i, 1])
            b = np.float64(rgb[j, i, 2])
            maxc = max(r, max(g, b))
            minc = min(r, min(g, b))
            delta = maxc - minc
            v = maxc / 255.0
            if maxc == 0.0:
                s = 0.0
            else:
                s = delta / maxc
            if delta == 0.0:
                h = 0.0
            elif maxc == r:
                h = 60.0 * ((g - b) / delta)
                if h < 0.0:
                    h += 360.0
            elif maxc == g:
                h = 60.0 * ((b - r) / delta) + 120.0
            else:
                h = 60.0 * ((r - g) / delta) + 240.0
            ok = s >= s_lo and s <= s_hi and v >= v_lo and v <= v_hi
            if ok:
                if hue_lo <= hue_hi:
                    ok = h >= hue_lo and h <= hue_hi
                else:
                    ok = h >= hue_lo or h <= hue_hi
            out[j, i] = ok
    return out


@njit(cache=True)
def erode(mask, radius):
    h, w = mask.shape
    out = np.zeros((h, w), np.bool_)
    for y in range(h):
        for x in range(w):
            if not mask[y, x]:
                continue
            keep = True
            if y < radius or y >= h - radius or x < radius or x >= w - radius:
                keep = False  # window reaches outside: background
            else:
                for dy in range(-radius, radius + 1):
                    for dx in range(-radius, radius + 1):
                        if not mask[y + dy, x + dx]:
                            keep = False
                            break
                    if not keep:
                        break
            out[y, x] = keep
    return out


@njit(cache=True)
def dilate(mask, radius):
    h, w = mask.shape
    out = np.zeros((h, w), np.bool_)
    for y in range(h):
        for x in range(w):
            hit = False
            y0 = max(0, y - radius)
            y1 = min(h - 1, y + radius)
            x0 = max(0, x - radius)
            x1 = min(w - 1, x + radius)
            for yy in range(y0, y1 + 1):
                for xx in range(x0, x1 + 1):
                    if mask[yy, xx]:
                        hit = True
                        break
                if hit:
                    break
            out[y, x] = hit
    return out


@njit(cache=True)
def label_components(mask, connectivity=8):
    h, w = mask.shape
    labels = np.zeros((h, w), np.int32)
    stack_y = np.empty(h * w, np.int32)
    stack_x = np.empty(h * w, np.int32)
    count = 0
    for sy in range(h):
        for sx in range(w):
            if not mask[sy, sx] or labels[sy, sx] != 0:
                continue
            count += 1
            top = 0
            stack_y[0] = sy
            stack_x[0] = sx
            labels[sy, sx] = count
            top = 1
            while top > 0:
                top -= 1
                y = stack_y[top]
                x = stack_x[top]
                for dy in range(-1, 2):
                    for dx in range(-1, 2):
                        if dy == 0 and dx == 0:
                            continue
                        if connectivity == 4 and dy != 0 and dx != 0:
                            continue
                        ny = y + dy
                        nx = x + dx
                        if 0 <= ny < h and 0 <= nx < w:
                            if mask[ny, nx] and labels[ny, nx] == 0:
                                labels[ny, nx] = count
                                stack_y[top] = ny
                                stack_x[top] = nx
                                top += 1
    return labels, count


@njit(cache=True)
def trace_contour(mask, start_y, start_x):
    area = 0
    for y in range(mask.shape[0]):
        for x in range(mask.shape[1]):
            if mask[y, x]:
                area += 1
    max_iter = 8 * area + 16
    buf = np.empty((max_iter + 1, 2), np.int32)
    buf[0, 0] = start_x
    buf[0, 1] = start_y
    n = 1
    y = start_y
    x = start_x
    b = 0
    first_dir = -1
    for _ in range(max_iter):
        found = -1
        for i in range(8):
            idx = (b + i) % 8
            if mask[y + _MOORE[idx, 0], x + _MOORE[idx, 1]]:
                found = idx
                break
        if found < 0:
            break
        if y == start_y and x == start_x:
            if first_dir < 0:
                first_dir = found
            elif found == first_dir:
                break
        y += _MOORE[found, 0]
        x += _MOORE[found, 1]
        b = (found + 5) % 8
        buf[n, 0] = x
        buf[n, 1] = y
        n += 1
    if n > 1 and buf[n - 1, 0] == buf[0, 0] and buf[n - 1, 1] == buf[0, 1]:
        n -= 1
    return buf[:n].copy()
