"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled backend (`peelsim.kernels._speed`, built from Cython) is
preferred when importable; `PEEL_KERNELS=pure` forces the fallback and
`PEEL_KERNELS=c` makes a missing extension a hard error instead of a
silent downgrade.
"""

import os

_choice = os.environ.get("PEEL_KERNELS", "").strip().lower()

if _choice == "pure":
    from . import pure as _impl
    BACKEND = "pure"
elif _choice == "c":
    from . import _speed as _impl  # noqa: F401  (hard requirement)
    BACKEND = "c"
elif _choice == "":
    try:
        from . import _speed as _impl
        BACKEND = "c"
    except ImportError:
        from . import pure as _impl
        BACKEND = "pure"
else:
    raise RuntimeError(f"PEEL_KERNELS must be 'pure' or 'c', not {_choice!r}")

OP_ADD = _impl.OP_ADD
OP_SUB = _impl.OP_SUB
OP_MUL = _impl.OP_MUL
OP_DIV = _impl.OP_DIV
OP_AND = _impl.OP_AND
OP_IOR = _impl.OP_IOR
OP_XOR = _impl.OP_XOR
OP_NOT = _impl.OP_NOT
PREFIX_OPS = _impl.PREFIX_OPS
BIT_OPS = _impl.BIT_OPS

alu_op = _impl.alu_op
prefix_scan = _impl.prefix_scan
bit_prefix = _impl.bit_prefix
fill_rect = _impl.fill_rect
composite = _impl.composite
