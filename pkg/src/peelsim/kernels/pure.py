"""Pure-Python kernel backend.

Reference implementations of the hot primitives; the compiled backend in
`_speed.pyx` mirrors this module function for function. Keep the two in
lockstep: `tests/test_kernels.py` cross-checks them.
"""

OP_ADD = 0
OP_SUB = 1
OP_MUL = 2
OP_DIV = 3
OP_AND = 4
OP_IOR = 5
OP_XOR = 6
OP_NOT = 7

PREFIX_OPS = (OP_ADD, OP_SUB, OP_MUL, OP_AND, OP_IOR, OP_XOR)
BIT_OPS = (OP_AND, OP_IOR, OP_XOR)


def _signed(value, width):
    return value - (1 << width) if value >> (width - 1) else value


def alu_op(op, a, b, width):
    """One ALU operation over width-bit unsigned cells.

    Returns (result, flags) with flags packed as Z<<3 | N<<2 | C<<1 | V.
    Raises ZeroDivisionError for a zero divisor.
    """
    mask = (1 << width) - 1
    a &= mask
    b &= mask
    c = v = 0
    if op == OP_ADD:
        t = a + b
        res = t & mask
        c = t >> width
        v = int((a >> (width - 1)) == (b >> (width - 1)) != (res >> (width - 1)))
    elif op == OP_SUB:
        res = (a - b) & mask
        c = int(a < b)
        v = int((a >> (width - 1)) != (b >> (width - 1))
                and (res >> (width - 1)) != (a >> (width - 1)))
    elif op == OP_MUL:
        t = a * b
        res = t & mask
        c = int(t > mask)
        st = _signed(a, width) * _signed(b, width)
        v = int(not -(1 << (width - 1)) <= st < (1 << (width - 1)))
    elif op == OP_DIV:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        sa, sb = _signed(a, width), _signed(b, width)
        q = abs(sa) // abs(sb)
        if (sa < 0) != (sb < 0):
            q = -q
        res = q & mask
        v = int(sa == -(1 << (width - 1)) and sb == -1)
    elif op == OP_AND:
        res = a & b
    elif op == OP_IOR:
        res = a | b
    elif op == OP_XOR:
        res = a ^ b
    elif op == OP_NOT:
        res = ~a & mask
    else:
        raise ValueError(f"bad ALU op {op}")
    z = int(res == 0)
    n = (res >> (width - 1)) & 1
    return res, (z << 3) | (n << 2) | (c << 1) | v


def _combine(op, acc, value, mask):
    if op == OP_ADD:
        return (acc + value) & mask
    if op == OP_SUB:
        return (acc - value) & mask
    if op == OP_MUL:
        return (acc * value) & mask
    if op == OP_AND:
        return acc & value
    if op == OP_IOR:
        return acc | value
    if op == OP_XOR:
        return acc ^ value
    raise ValueError(f"bad prefix op {op}")


def prefix_scan(values, op, domain, direction, width):
    """Running combination over subdomains of a selected register sequence.

    `values` is the source in ascending register order. domain = 0 treats
    the whole sequence as one subdomain, otherwise every `domain`
    consecutive entries form one. The returned list is aligned to the
    ascending destination order: with direction 0 the k-th prefix lands on
    the k-th slot of its subdomain, with direction 1 the scan runs from
    the high end and lands high-to-low.
    """
    n = len(values)
    if n == 0:
        return []
    d = domain if domain else n
    if n % d:
        raise ValueError(f"domain width {d} does not divide selection size {n}")
    mask = (1 << width) - 1
    out = [0] * n
    for base in range(0, n, d):
        if direction == 0:
            acc = values[base] & mask
            out[base] = acc
            for k in range(1, d):
                acc = _combine(op, acc, values[base + k] & mask, mask)
                out[base + k] = acc
        else:
            acc = values[base + d - 1] & mask
            out[base + d - 1] = acc
            for k in range(d - 2, -1, -1):
                acc = _combine(op, acc, values[base + k] & mask, mask)
                out[base + k] = acc
    return out


def bit_prefix(value, width, split, direction, op):
    """Running combination over the bits of one register.

    Bits are ordered most-significant first; split = 0 scans the whole
    register, otherwise each `split` consecutive bits form a subdomain.
    Direction 0 scans left to right, 1 right to left.
    """
    d = split if split else width
    if width % d:
        raise ValueError(f"bit split {d} does not divide register width {width}")
    bits = [(value >> (width - 1 - i)) & 1 for i in range(width)]
    out = [0] * width
    for base in range(0, width, d):
        if direction == 0:
            idx = range(base, base + d)
        else:
            idx = range(base + d - 1, base - 1, -1)
        acc = None
        for i in idx:
            acc = bits[i] if acc is None else _combine(op, acc, bits[i], 1)
            out[i] = acc
    res = 0
    for i, bit in enumerate(out):
        res |= bit << (width - 1 - i)
    return res


def fill_rect(buf, buf_w, buf_h, x, y, w, h, rgba):
    """Fill a clipped rectangle of one RGBA layer with a single color."""
    x0, y0 = max(x, 0), max(y, 0)
    x1, y1 = min(x + w, buf_w), min(y + h, buf_h)
    if x0 >= x1 or y0 >= y1:
        return
    pixel = bytes(((rgba >> 24) & 0xFF, (rgba >> 16) & 0xFF,
                   (rgba >> 8) & 0xFF, rgba & 0xFF))
    row = pixel * (x1 - x0)
    for yy in range(y0, y1):
        start = (yy * buf_w + x0) * 4
        buf[start:start + len(row)] = row


def composite(layers, w, h):
    """Alpha-over stack of RGBA layers onto an opaque black background.

    Layer 0 is the bottom. Returns a fresh RGBA bytearray (alpha 255
    everywhere since the background is opaque).
    """
    n = w * h
    out = bytearray(n * 4)
    out[3::4] = b"\xff" * n
    for layer in layers:
        for i in range(0, n * 4, 4):
            a = layer[i + 3]
            if a == 0:
                continue
            if a == 255:
                out[i:i + 4] = layer[i:i + 3] + b"\xff"
            else:
                inv = 255 - a
                out[i] = (layer[i] * a + out[i] * inv) // 255
                out[i + 1] = (layer[i + 1] * a + out[i + 1] * inv) // 255
                out[i + 2] = (layer[i + 2] * a + out[i + 2] * inv) // 255
    return out
