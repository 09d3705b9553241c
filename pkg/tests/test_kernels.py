"""Cross-checks the compiled kernel backend against the pure fallback."""

import random

import pytest

from peelsim.kernels import pure

try:
    from peelsim.kernels import _speed
except ImportError:
    _speed = None

needs_speed = pytest.mark.skipif(_speed is None,
                                 reason="compiled kernels not built")

ALL_OPS = (pure.OP_ADD, pure.OP_SUB, pure.OP_MUL, pure.OP_DIV, pure.OP_AND,
           pure.OP_IOR, pure.OP_XOR, pure.OP_NOT)


@needs_speed
def test_alu_op_backends_agree():
    rng = random.Random(41)
    for width in (8, 16, 32, 64):
        for op in ALL_OPS:
            for _ in range(400):
                a = rng.randrange(1 << width)
                b = rng.randrange(1 << width)
                if op == pure.OP_DIV and b == 0:
                    b = 1
                assert pure.alu_op(op, a, b, width) == \
                    _speed.alu_op(op, a, b, width), (width, op, a, b)


@needs_speed
def test_alu_div_by_zero_both_raise():
    for impl in (pure, _speed):
        with pytest.raises(ZeroDivisionError):
            impl.alu_op(pure.OP_DIV, 5, 0, 32)


@needs_speed
def test_alu_edge_values():
    for width in (8, 16, 32, 64):
        top = (1 << width) - 1
        half = 1 << (width - 1)
        cases = [(top, top), (top, 1), (half, half), (half, top), (0, 0),
                 (1, top), (half - 1, half - 1), (half, 1)]
        for op in ALL_OPS:
            for a, b in cases:
                if op == pure.OP_DIV and b == 0:
                    continue
                assert pure.alu_op(op, a, b, width) == \
                    _speed.alu_op(op, a, b, width), (width, op, a, b)


@needs_speed
def test_div_min_over_minus_one():
    for width in (8, 32, 64):
        a = 1 << (width - 1)           # most negative value
        b = (1 << width) - 1           # -1
        assert pure.alu_op(pure.OP_DIV, a, b, width) == \
            _speed.alu_op(pure.OP_DIV, a, b, width)


@needs_speed
def test_prefix_scan_backends_agree():
    rng = random.Random(42)
    for _ in range(1500):
        n = rng.choice((1, 2, 4, 8))
        values = [rng.randrange(1 << 32) for _ in range(n)]
        domain = rng.choice([0] + [d for d in (1, 2, 4, 8) if n % d == 0])
        direction = rng.randrange(2)
        op = rng.choice(pure.PREFIX_OPS)
        assert pure.prefix_scan(values, op, domain, direction, 32) == \
            _speed.prefix_scan(values, op, domain, direction, 32)


@needs_speed
def test_prefix_scan_rejects_bad_domain():
    for impl in (pure, _speed):
        with pytest.raises(ValueError):
            impl.prefix_scan([1, 2, 3], pure.OP_ADD, 2, 0, 32)


@needs_speed
def test_bit_prefix_backends_agree():
    rng = random.Random(43)
    for width in (8, 16, 32, 64):
        splits = [0] + [d for d in (1, 2, 4, 8, 16) if width % d == 0]
        for _ in range(300):
            value = rng.randrange(1 << width)
            split = rng.choice(splits)
            direction = rng.randrange(2)
            op = rng.choice(pure.BIT_OPS)
            assert pure.bit_prefix(value, width, split, direction, op) == \
                _speed.bit_prefix(value, width, split, direction, op)


@needs_speed
def test_fill_rect_backends_agree():
    rng = random.Random(44)
    for _ in range(60):
        w, h = 37, 23
        a = bytearray(w * h * 4)
        b = bytearray(w * h * 4)
        x, y = rng.randrange(-10, 40), rng.randrange(-10, 30)
        rw, rh = rng.randrange(0, 30), rng.randrange(0, 30)
        color = rng.randrange(1 << 32)
        pure.fill_rect(a, w, h, x, y, rw, rh, color)
        _speed.fill_rect(b, w, h, x, y, rw, rh, color)
        assert a == b


@needs_speed
def test_composite_backends_agree():
    rng = random.Random(45)
    w, h = 19, 13
    layers = []
    for _ in range(4):
        layer = bytearray(rng.randrange(256) for _ in range(w * h * 4))
        # force a mix of fully transparent / fully opaque / blended pixels
        for i in range(3, w * h * 4, 4):
            layer[i] = rng.choice((0, 255, layer[i]))
        layers.append(layer)
    assert pure.composite(layers, w, h) == _speed.composite(layers, w, h)


def test_pure_composite_background_is_opaque_black():
    out = pure.composite([bytearray(4 * 6)], 2, 3)
    assert bytes(out) == b"\x00\x00\x00\xff" * 6
