"""Multilayer frame buffer and the eleven graphics operations.

Coordinates: origin top-left, x rightward, y downward; a frame's (x, y)
is its top-left corner. Frames clipped against the screen never fault
and never touch out-of-bounds memory. Pixels are RGBA8888, alpha 0 means
transparent at that layer.
"""

import math

from . import font8x8
from .errors import AddressOutOfRange, BadLayer, BadParameter, BadShape, \
    UnsupportedGlyph
from .kernels import composite as _composite_kernel
from .kernels import fill_rect as _fill_rect

TRANSPARENT = 0x00000000


def _check_layer(machine, layer: int):
    if layer >= machine.config.layer_count:
        raise BadLayer(
            f"layer {layer} beyond configured {machine.config.layer_count}")


def get_pixel(machine, layer: int, x: int, y: int) -> int:
    buf = machine.vram[layer]
    i = (y * machine.config.screen_width_px + x) * 4
    return int.from_bytes(buf[i:i + 4], "big")


def set_pixel(machine, layer: int, x: int, y: int, rgba: int):
    buf = machine.vram[layer]
    i = (y * machine.config.screen_width_px + x) * 4
    buf[i:i + 4] = (rgba & 0xFFFFFFFF).to_bytes(4, "big")


def _in_bounds(machine, x: int, y: int) -> bool:
    return (0 <= x < machine.config.screen_width_px
            and 0 <= y < machine.config.screen_height_px)


def _snapshot(machine, layer, x, y, w, h):
    """Region pixels before any write; None marks off-screen cells."""
    return [[get_pixel(machine, layer, x + i, y + j)
             if _in_bounds(machine, x + i, y + j) else None
             for i in range(w)] for j in range(h)]


def fill(machine, layer: int, x: int, y: int, w: int, h: int, rgba: int):
    _check_layer(machine, layer)
    cfg = machine.config
    # clip here so arbitrarily large register values stay cheap no-ops
    x0, y0 = max(x, 0), max(y, 0)
    x1 = min(x + w, cfg.screen_width_px)
    y1 = min(y + h, cfg.screen_height_px)
    if x0 >= x1 or y0 >= y1:
        return
    _fill_rect(machine.vram[layer], cfg.screen_width_px, cfg.screen_height_px,
               x0, y0, x1 - x0, y1 - y0, rgba)


def _clamp_frame(machine, w, h):
    """Bound frame loop extents at twice the screen size.

    Geometry (centers, mirror axes) is preserved for any frame that could
    still intersect the screen; beyond that the frame is degenerate and
    only its first two screens' worth of cells are considered.
    """
    cfg = machine.config
    return (min(w, 2 * cfg.screen_width_px),
            min(h, 2 * cfg.screen_height_px))


# ------------------------------------------------------------------- set frame

def stf(machine, form_index: int, vals):
    """The five set-frame overloads: squares, rectangles, rotations, polygons."""
    if form_index == 1:
        x, y, w, color = vals
        fill(machine, 0, x, y, w, w, color)
    elif form_index == 2:
        x, y, w, color, layer = vals
        fill(machine, layer, x, y, w, w, color)
    elif form_index == 3:
        x, y, w, h, color, layer = vals
        fill(machine, layer, x, y, w, h, color)
    elif form_index == 4:
        x, y, w, h, angle, color, layer = vals
        _rotated_rect(machine, layer, x, y, w, h, angle, color)
    elif form_index == 5:
        x, y, edges, edge_w, angle, color, border, layer = vals
        _polygon(machine, layer, x, y, edges, edge_w, angle, color, border)
    else:
        raise BadParameter(f"set-frame form {form_index}")


def _rotated_rect(machine, layer, x, y, w, h, angle, color):
    _check_layer(machine, layer)
    angle %= 360
    if angle == 0:
        fill(machine, layer, x, y, w, h, color)
        return
    if w <= 0 or h <= 0:
        return
    # doubled coordinates keep quadrant rotations exact
    cx2, cy2 = 2 * x + w, 2 * y + h
    if angle in (90, 180, 270):
        if angle == 180:
            bw, bh = w, h
        else:
            bw, bh = h, w
        bx0 = (cx2 - bw) // 2
        by0 = (cy2 - bh) // 2
        for py in range(max(by0, 0),
                        min(by0 + bh + 1, machine.config.screen_height_px)):
            for px in range(max(bx0, 0),
                            min(bx0 + bw + 1, machine.config.screen_width_px)):
                px2, py2 = 2 * px + 1, 2 * py + 1
                if angle == 90:
                    sx2 = cx2 + (py2 - cy2)
                    sy2 = cy2 - (px2 - cx2)
                elif angle == 180:
                    sx2 = 2 * cx2 - px2
                    sy2 = 2 * cy2 - py2
                else:
                    sx2 = cx2 - (py2 - cy2)
                    sy2 = cy2 + (px2 - cx2)
                if 2 * x <= sx2 < 2 * (x + w) and 2 * y <= sy2 < 2 * (y + h):
                    set_pixel(machine, layer, px, py, color)
        return
    theta = math.radians(angle)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    cx, cy = cx2 / 2, cy2 / 2
    half_diag = math.hypot(w, h) / 2 + 1
    x0 = max(int(cx - half_diag), 0)
    x1 = min(int(cx + half_diag) + 1, machine.config.screen_width_px)
    y0 = max(int(cy - half_diag), 0)
    y1 = min(int(cy + half_diag) + 1, machine.config.screen_height_px)
    for py in range(y0, y1):
        for px in range(x0, x1):
            dx, dy = px + 0.5 - cx, py + 0.5 - cy
            sx = cx + dx * cos_t + dy * sin_t
            sy = cy - dx * sin_t + dy * cos_t
            if x <= sx < x + w and y <= sy < y + h:
                set_pixel(machine, layer, px, py, color)


def _polygon(machine, layer, x, y, edges, edge_len, angle, color, border):
    _check_layer(machine, layer)
    if edges < 3:
        raise BadShape(f"polygon needs at least 3 edges, got {edges}")
    if edge_len <= 0:
        return
    radius = edge_len / (2 * math.sin(math.pi / edges))
    cx, cy = x + radius, y + radius
    verts = []
    for k in range(edges):
        theta = math.radians(angle) + 2 * math.pi * k / edges
        verts.append((cx + radius * math.cos(theta),
                      cy + radius * math.sin(theta)))

    def inside(px, py):
        # even-odd rule on the pixel center
        hit = False
        for k in range(edges):
            x1, y1 = verts[k]
            x2, y2 = verts[(k + 1) % edges]
            if (y1 > py) != (y2 > py):
                xi = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
                if px < xi:
                    hit = not hit
        return hit

    x0 = max(int(cx - radius) - 1, 0)
    x1 = min(int(cx + radius) + 2, machine.config.screen_width_px)
    y0 = max(int(cy - radius) - 1, 0)
    y1 = min(int(cy + radius) + 2, machine.config.screen_height_px)
    mask = [[inside(px + 0.5, py + 0.5) for px in range(x0, x1)]
            for py in range(y0, y1)]
    for j, row in enumerate(mask):
        for i, is_in in enumerate(row):
            if not is_in:
                continue
            px, py = x0 + i, y0 + j
            on_edge = (i == 0 or j == 0 or i == len(row) - 1
                       or j == len(mask) - 1
                       or not (row[i - 1] and row[i + 1]
                               and mask[j - 1][i] and mask[j + 1][i]))
            set_pixel(machine, layer, px, py, border if on_edge else color)


# -------------------------------------------------- clear / copy / move / swap

def clf(machine, x, y, w, h, layer):
    fill(machine, layer, x, y, w, h, TRANSPARENT)


def cpf(machine, x, y, w, h, dx, dy, src_layer, dst_layer):
    _check_layer(machine, src_layer)
    _check_layer(machine, dst_layer)
    w, h = _clamp_frame(machine, w, h)
    snap = _snapshot(machine, src_layer, x, y, w, h)
    _paint(machine, dst_layer, dx, dy, snap)


def mvf(machine, x, y, w, h, dx, dy, src_layer, dst_layer):
    # copy from the pre-state snapshot, then clear the whole source frame
    _check_layer(machine, src_layer)
    _check_layer(machine, dst_layer)
    w, h = _clamp_frame(machine, w, h)
    snap = _snapshot(machine, src_layer, x, y, w, h)
    _paint(machine, dst_layer, dx, dy, snap)
    clf(machine, x, y, w, h, src_layer)


def swf(machine, x, y, w, h, x2, y2, layer_a, layer_b):
    _check_layer(machine, layer_a)
    _check_layer(machine, layer_b)
    w, h = _clamp_frame(machine, w, h)
    snap_a = _snapshot(machine, layer_a, x, y, w, h)
    snap_b = _snapshot(machine, layer_b, x2, y2, w, h)
    # exchange only cells that exist on both sides
    for j in range(h):
        for i in range(w):
            if snap_a[j][i] is None or snap_b[j][i] is None:
                continue
            set_pixel(machine, layer_a, x + i, y + j, snap_b[j][i])
            set_pixel(machine, layer_b, x2 + i, y2 + j, snap_a[j][i])


def _paint(machine, layer, dx, dy, snap):
    for j, row in enumerate(snap):
        for i, pix in enumerate(row):
            if pix is None or not _in_bounds(machine, dx + i, dy + j):
                continue
            set_pixel(machine, layer, dx + i, dy + j, pix)


# ----------------------------------------------------- rotate / flip / scale

def rtf(machine, x, y, w, h, angle, layer):
    """Rotate the frame contents about the frame center."""
    _check_layer(machine, layer)
    w, h = _clamp_frame(machine, w, h)
    if w <= 0 or h <= 0:
        return
    angle %= 360
    if angle == 0:
        return
    snap = _snapshot(machine, layer, x, y, w, h)
    clf(machine, x, y, w, h, layer)
    cx2, cy2 = 2 * x + w, 2 * y + h
    if angle in (90, 180, 270):
        bw, bh = (w, h) if angle == 180 else (h, w)
        bx0, by0 = (cx2 - bw) // 2, (cy2 - bh) // 2
        for py in range(by0, by0 + bh + 1):
            for px in range(bx0, bx0 + bw + 1):
                if not _in_bounds(machine, px, py):
                    continue
                px2, py2 = 2 * px + 1, 2 * py + 1
                if angle == 90:
                    sx2 = cx2 + (py2 - cy2)
                    sy2 = cy2 - (px2 - cx2)
                elif angle == 180:
                    sx2 = 2 * cx2 - px2
                    sy2 = 2 * cy2 - py2
                else:
                    sx2 = cx2 - (py2 - cy2)
                    sy2 = cy2 + (px2 - cx2)
                si, sj = (sx2 - 2 * x) // 2, (sy2 - 2 * y) // 2
                if 0 <= si < w and 0 <= sj < h and snap[sj][si] is not None:
                    set_pixel(machine, layer, px, py, snap[sj][si])
        return
    theta = math.radians(angle)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    cx, cy = cx2 / 2, cy2 / 2
    half_diag = math.hypot(w, h) / 2 + 1
    for py in range(int(cy - half_diag), int(cy + half_diag) + 1):
        for px in range(int(cx - half_diag), int(cx + half_diag) + 1):
            if not _in_bounds(machine, px, py):
                continue
            dx, dy = px + 0.5 - cx, py + 0.5 - cy
            sx = cx + dx * cos_t + dy * sin_t
            sy = cy - dx * sin_t + dy * cos_t
            si, sj = int(sx - x), int(sy - y)
            if x <= sx < x + w and y <= sy < y + h \
                    and snap[sj][si] is not None:
                set_pixel(machine, layer, px, py, snap[sj][si])


def flf(machine, x, y, w, h, axis, layer):
    _check_layer(machine, layer)
    if axis not in (0, 1):
        raise BadParameter(f"flip axis {axis} (0 horizontal, 1 vertical)")
    w, h = _clamp_frame(machine, w, h)
    snap = _snapshot(machine, layer, x, y, w, h)
    for j in range(h):
        for i in range(w):
            src = snap[j][w - 1 - i] if axis == 0 else snap[h - 1 - j][i]
            if src is None or not _in_bounds(machine, x + i, y + j):
                continue
            set_pixel(machine, layer, x + i, y + j, src)


def scf(machine, x, y, w, h, numer, denom, layer):
    _check_layer(machine, layer)
    if numer <= 0 or denom <= 0:
        raise BadParameter("scale factor must be positive")
    w, h = _clamp_frame(machine, w, h)
    if w <= 0 or h <= 0:
        return
    snap = _snapshot(machine, layer, x, y, w, h)
    new_w = min(w * numer // denom, 2 * machine.config.screen_width_px)
    new_h = min(h * numer // denom, 2 * machine.config.screen_height_px)
    clf(machine, x, y, w, h, layer)
    for j in range(new_h):
        sj = j * denom // numer
        for i in range(new_w):
            si = i * denom // numer
            if si >= w or sj >= h or snap[sj][si] is None:
                continue
            if _in_bounds(machine, x + i, y + j):
                set_pixel(machine, layer, x + i, y + j, snap[sj][si])


# ------------------------------------------------------------- RAM transfers

def _pixel_span_words(machine, addr, count_bytes):
    bpw = machine.config.ram_word_bytes
    words = 2 + (count_bytes + bpw - 1) // bpw
    if addr < 0 or addr + words > machine.config.ram_word_count:
        raise AddressOutOfRange(
            f"image of {count_bytes} pixel bytes at word {addr} exceeds RAM")
    return words


def svf(machine, addr, x, y, w, h, layer):
    """Save a frame to RAM: width word, height word, then RGBA bytes."""
    _check_layer(machine, layer)
    words = _pixel_span_words(machine, addr, w * h * 4)
    for k in range(words):
        machine.ram_write(addr + k, 0)
    machine.ram_write(addr, w)
    machine.ram_write(addr + 1, h)
    data = bytearray()
    for j in range(y, y + h):
        for i in range(x, x + w):
            pix = get_pixel(machine, layer, i, j) \
                if _in_bounds(machine, i, j) else 0
            data.extend(pix.to_bytes(4, "big"))
    machine.write_bytes((addr + 2) * machine.config.ram_word_bytes,
                        bytes(data))


def ldf(machine, addr, x, y, layer):
    """Paint a RAM-resident frame (inverse of svf) at (x, y)."""
    _check_layer(machine, layer)
    w = machine.ram_read(addr)
    h = machine.ram_read(addr + 1)
    _pixel_span_words(machine, addr, w * h * 4)
    base = (addr + 2) * machine.config.ram_word_bytes
    for j in range(h):
        for i in range(w):
            off = base + (j * w + i) * 4
            pix = 0
            for b in range(4):
                pix = (pix << 8) | machine.code_byte_read(off + b)
            if _in_bounds(machine, x + i, y + j):
                set_pixel(machine, layer, x + i, y + j, pix)


# ----------------------------------------------------------------- characters

def chf(machine, x, y, char_code, size, color, layer):
    _check_layer(machine, layer)
    if char_code not in font8x8.PRINTABLE:
        raise UnsupportedGlyph(f"character code {char_code} is not printable")
    if size <= 0:
        return
    rows = font8x8.glyph(char_code)
    for gy, row in enumerate(rows):
        for gx in range(8):
            if row & (0x80 >> gx):
                fill(machine, layer, x + gx * size, y + gy * size,
                     size, size, color)


# ------------------------------------------------------------------ composite

def composite(machine) -> bytearray:
    """Alpha-over stack of all layers onto opaque black, bottom first."""
    cfg = machine.config
    return _composite_kernel(machine.vram, cfg.screen_width_px,
                             cfg.screen_height_px)


def to_p6(rgba, w: int, h: int) -> bytes:
    """Binary portable pixmap of a composited RGBA buffer."""
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    rgb = bytearray(w * h * 3)
    rgb[0::3] = rgba[0::4]
    rgb[1::3] = rgba[1::4]
    rgb[2::3] = rgba[2::4]
    return header + bytes(rgb)
