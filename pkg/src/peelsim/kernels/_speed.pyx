# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend; mirrors kernels/pure.py function for function."""

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"
    ctypedef long long i128 "__int128"

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


cdef inline long long _signed(unsigned long long value, int width):
    if (value >> (width - 1)) & 1:
        return <long long> (value - (<u128> 1 << width))
    return <long long> value


def alu_op(int op, unsigned long long a, unsigned long long b, int width):
    cdef unsigned long long mask = <unsigned long long> ((<u128> 1 << width) - 1)
    cdef unsigned long long res = 0
    cdef u128 t
    cdef i128 st
    cdef long long sa, sb, q
    cdef int c = 0, v = 0, z, n
    a &= mask
    b &= mask
    if op == 0:  # ADD
        t = <u128> a + b
        res = <unsigned long long> (t & mask)
        c = <int> (t >> width)
        v = 1 if (a >> (width - 1)) == (b >> (width - 1)) != (res >> (width - 1)) else 0
    elif op == 1:  # SUB
        res = (a - b) & mask
        c = 1 if a < b else 0
        if (a >> (width - 1)) != (b >> (width - 1)) and (res >> (width - 1)) != (a >> (width - 1)):
            v = 1
    elif op == 2:  # MUL
        t = <u128> a * b
        res = <unsigned long long> (t & mask)
        c = 1 if t > mask else 0
        st = <i128> _signed(a, width) * _signed(b, width)
        if st < -(<i128> 1 << (width - 1)) or st >= (<i128> 1 << (width - 1)):
            v = 1
    elif op == 3:  # DIV, signed, truncating toward zero
        if b == 0:
            raise ZeroDivisionError("division by zero")
        sa = _signed(a, width)
        sb = _signed(b, width)
        if sb == -1 and sa == -(<long long> 1 << (width - 1)):
            res = <unsigned long long> sa & mask
            v = 1
        else:
            q = sa / sb  # C division truncates toward zero
            res = (<unsigned long long> q) & mask
    elif op == 4:
        res = a & b
    elif op == 5:
        res = a | b
    elif op == 6:
        res = a ^ b
    elif op == 7:
        res = (~a) & mask
    else:
        raise ValueError(f"bad ALU op {op}")
    z = 1 if res == 0 else 0
    n = <int> ((res >> (width - 1)) & 1)
    return res, (z << 3) | (n << 2) | (c << 1) | v


cdef inline unsigned long long _combine(int op, unsigned long long acc,
                                        unsigned long long value,
                                        unsigned long long mask) except? 0xDEAD:
    if op == 0:
        return (acc + value) & mask
    if op == 1:
        return (acc - value) & mask
    if op == 2:
        return (acc * value) & mask
    if op == 4:
        return acc & value
    if op == 5:
        return acc | value
    if op == 6:
        return acc ^ value
    raise ValueError(f"bad prefix op {op}")


def prefix_scan(values, int op, int domain, int direction, int width):
    cdef Py_ssize_t n = len(values)
    if n == 0:
        return []
    cdef int d = domain if domain else <int> n
    if n % d:
        raise ValueError(f"domain width {d} does not divide selection size {n}")
    cdef unsigned long long mask = <unsigned long long> ((<u128> 1 << width) - 1)
    cdef list out = [0] * n
    cdef Py_ssize_t base
    cdef int k
    cdef unsigned long long acc
    for base in range(0, n, d):
        if direction == 0:
            acc = <unsigned long long> values[base] & mask
            out[base] = acc
            for k in range(1, d):
                acc = _combine(op, acc, <unsigned long long> values[base + k] & mask, mask)
                out[base + k] = acc
        else:
            acc = <unsigned long long> values[base + d - 1] & mask
            out[base + d - 1] = acc
            for k in range(d - 2, -1, -1):
                acc = _combine(op, acc, <unsigned long long> values[base + k] & mask, mask)
                out[base + k] = acc
    return out


def bit_prefix(unsigned long long value, int width, int split, int direction, int op):
    cdef int d = split if split else width
    if width % d:
        raise ValueError(f"bit split {d} does not divide register width {width}")
    cdef unsigned long long res = 0
    cdef int base, i, step
    cdef unsigned long long acc, bit
    for base in range(0, width, d):
        acc = 0
        for step in range(d):
            i = base + step if direction == 0 else base + d - 1 - step
            bit = (value >> (width - 1 - i)) & 1
            acc = bit if step == 0 else _combine(op, acc, bit, 1)
            res |= acc << (width - 1 - i)
    return res


def fill_rect(unsigned char[:] buf, int buf_w, int buf_h, int x, int y,
              int w, int h, unsigned long long rgba):
    cdef int x0 = x if x > 0 else 0
    cdef int y0 = y if y > 0 else 0
    cdef int x1 = x + w if x + w < buf_w else buf_w
    cdef int y1 = y + h if y + h < buf_h else buf_h
    if x0 >= x1 or y0 >= y1:
        return
    cdef unsigned char r = (rgba >> 24) & 0xFF
    cdef unsigned char g = (rgba >> 16) & 0xFF
    cdef unsigned char b = (rgba >> 8) & 0xFF
    cdef unsigned char a = rgba & 0xFF
    cdef int yy, xx
    cdef Py_ssize_t idx
    for yy in range(y0, y1):
        idx = (<Py_ssize_t> yy * buf_w + x0) * 4
        for xx in range(x0, x1):
            buf[idx] = r
            buf[idx + 1] = g
            buf[idx + 2] = b
            buf[idx + 3] = a
            idx += 4


def composite(layers, int w, int h):
    cdef Py_ssize_t n = <Py_ssize_t> w * h
    out_arr = bytearray(n * 4)
    cdef unsigned char[:] out = out_arr
    cdef const unsigned char[:] layer
    cdef Py_ssize_t i
    cdef int a, inv
    for i in range(n):
        out[i * 4 + 3] = 255
    for obj in layers:
        layer = obj
        for i in range(0, n * 4, 4):
            a = layer[i + 3]
            if a == 0:
                continue
            if a == 255:
                out[i] = layer[i]
                out[i + 1] = layer[i + 1]
                out[i + 2] = layer[i + 2]
            else:
                inv = 255 - a
                out[i] = <unsigned char> ((layer[i] * a + out[i] * inv) // 255)
                out[i + 1] = <unsigned char> ((layer[i + 1] * a + out[i + 1] * inv) // 255)
                out[i + 2] = <unsigned char> ((layer[i + 2] * a + out[i + 2] * inv) // 255)
    return out_arr
