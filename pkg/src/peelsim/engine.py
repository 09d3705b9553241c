"""Fetch-decode-execute over a machine state.

One call to step() runs exactly one instruction: fetch at PC through the
code-byte view of RAM, decode, dispatch on the form's semantics tag,
advance PC. Faults raise; the caller owns process-state transitions.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import codec, kernels, screen
from .errors import (
    BadTarget,
    DecodeFault,
    DivideByZero,
    DomainMismatch,
    Fault,
    MalformedRow,
    PeelError,
    SelectionMismatch,
    TruncatedInstruction,
    UnknownOpcode,
)
from .machine import render_value

_ALU_OPS = {
    "ADD": kernels.OP_ADD,
    "SUB": kernels.OP_SUB,
    "MUL": kernels.OP_MUL,
    "DIV": kernels.OP_DIV,
    "AND": kernels.OP_AND,
    "IOR": kernels.OP_IOR,
    "XOR": kernels.OP_XOR,
    "NOT": kernels.OP_NOT,
    "CMP": kernels.OP_SUB,
    "INC": kernels.OP_ADD,
    "DEC": kernels.OP_SUB,
}


@dataclass
class ExecStats:
    """Per-process instruction and cycle counters."""

    instructions: int = 0
    cycles: int = 0

    @property
    def ipc(self) -> Fraction:
        if self.cycles == 0:
            return Fraction(0)
        return Fraction(self.instructions, self.cycles)

    def model_time(self, clock_hz: int) -> Fraction:
        return Fraction(self.cycles, clock_hz)

    def as_dict(self, clock_hz: int) -> dict:
        return {
            "instructions": self.instructions,
            "cycles": self.cycles,
            "ipc": round(float(self.ipc), 4),
            "model_time_s": float(self.model_time(clock_hz)),
        }


@dataclass
class StepResult:
    decoded: codec.Decoded
    image_offset: int
    cycles: int = 0
    halted: bool = False
    waiting: bool = False
    changed: list = field(default_factory=list)


def mask_select(mask: int, window: int):
    """Register indices picked by a mask; bit 7 is the window's lowest."""
    base = 8 * window
    return [base + i for i in range(8) if (mask >> (7 - i)) & 1]


class _Ctx:
    """One instruction's worth of execution scaffolding."""

    def __init__(self, machine, entry):
        self.machine = machine
        self.entry = entry
        self.config = machine.config
        self.width = machine.config.register_width_bits
        self.changed = []
        self.pc = machine.pc
        self.line = None

    def fault(self, message, cls=Fault):
        return cls(message, pc=self.pc, line=self.line)

    def reg(self, index: int) -> int:
        if index >= self.config.spad_count:
            raise self.fault(f"register R{index} beyond SPAD size")
        return self.machine.spad[index]

    def setreg(self, index: int, value: int):
        if index >= self.config.spad_count:
            raise self.fault(f"register R{index} beyond SPAD size")
        self.machine.reg_write(index, value)
        self.changed.append((index, self.machine.spad[index]))

    def val(self, operand) -> int:
        return self.reg(operand.value) if operand.bit == 0 else operand.value

    def selection(self, mask: int, window: int):
        sel = mask_select(mask, window)
        for index in sel:
            if index >= self.config.spad_count:
                raise self.fault(
                    f"mask selects R{index} beyond SPAD size")
        return sel

    def set_flags(self, packed: int):
        self.machine.flags.set_from(packed)

    def alu(self, mnemonic: str, a: int, b: int):
        try:
            return kernels.alu_op(_ALU_OPS[mnemonic], a, b, self.width)
        except ZeroDivisionError:
            raise self.fault("division by zero", DivideByZero) from None


def step(machine, entry) -> StepResult:
    """Execute the instruction at machine.pc; raises Fault subclasses."""
    ctx = _Ctx(machine, entry)
    pc = machine.pc
    image_offset = entry.addr_to_offset.get(pc)
    if image_offset is None:
        raise Fault(f"PC {pc} is not at an instruction boundary", pc=pc)
    ctx.line = entry.line_for(image_offset)

    def read(addr):
        if not entry.start_byte <= addr < entry.end_byte:
            raise IndexError(addr)
        return machine.code_byte_read(addr)

    try:
        d = codec.decode_at(read, pc, codec.Geometry.coerce(machine.config))
    except (UnknownOpcode, TruncatedInstruction) as err:
        raise DecodeFault(str(err), pc=pc, line=ctx.line) from None

    result = StepResult(d, image_offset)
    next_pc = entry.next_addr(pc, d.length)
    try:
        jump = _dispatch(ctx, d, next_pc, result)
    except Fault:
        raise
    except PeelError as err:
        raise ctx.fault(f"{type(err).__name__}: {err}") from None
    machine.pc = machine.pc if (result.halted or result.waiting) \
        else (jump if jump is not None else next_pc)
    if not result.waiting:
        result.cycles = machine.config.cpi(d.mnemonic)
    result.changed = ctx.changed
    return result


def _dispatch(ctx, d, next_pc, result):
    tag = d.form.tag
    ops = d.operands
    m = ctx.machine
    mnem = d.mnemonic

    if tag == "nop":
        return None
    if tag == "hlt":
        result.halted = True
        return None

    # loads and stores
    if tag == "ldi":
        ctx.setreg(ops[0].value, ctx.val(ops[1]))
    elif tag == "vldi":
        value = ctx.val(ops[0])
        for index in ctx.selection(ops[1].value, ops[2].value):
            ctx.setreg(index, value)
    elif tag == "lda":
        ctx.reg(ops[0].value)  # bound check before the raw-index call
        m.load_register_from_ram(ops[0].value, ctx.val(ops[1]))
        ctx.changed.append((ops[0].value, ctx.reg(ops[0].value)))
    elif tag == "ldr":
        ctx.reg(ops[0].value)
        m.load_register_from_ram(ops[0].value, ctx.reg(ops[1].value))
        ctx.changed.append((ops[0].value, ctx.reg(ops[0].value)))
    elif tag == "ldx":
        ctx.reg(ops[0].value)
        m.load_register_from_ram(ops[0].value,
                                 ctx.val(ops[1]) + ctx.reg(ops[2].value))
        ctx.changed.append((ops[0].value, ctx.reg(ops[0].value)))
    elif tag == "sta":
        ctx.reg(ops[0].value)
        m.store_register_to_ram(ops[0].value, ctx.val(ops[1]))
    elif tag == "str":
        ctx.reg(ops[0].value)
        m.store_register_to_ram(ops[0].value, ctx.reg(ops[1].value))
    elif tag == "sti":
        address = ctx.val(ops[0])
        payload = ops[1].payload or b""
        bpw = ctx.config.ram_word_bytes
        words = (len(payload) + bpw - 1) // bpw
        m._check_ram(address, max(words, 1))
        m.write_bytes(address * bpw, payload)

    # scalar ALU
    elif tag == "alu2":
        res, flags = ctx.alu(mnem, ctx.reg(ops[0].value), ctx.val(ops[1]))
        ctx.setreg(ops[0].value, res)
        ctx.set_flags(flags)
    elif tag == "alu3":
        res, flags = ctx.alu(mnem, ctx.val(ops[1]), ctx.val(ops[2]))
        ctx.setreg(ops[0].value, res)
        ctx.set_flags(flags)
    elif tag == "cmp":
        _, flags = ctx.alu("CMP", ctx.reg(ops[0].value), ctx.val(ops[1]))
        ctx.set_flags(flags)
    elif tag == "incdec":
        res, flags = ctx.alu(mnem, ctx.reg(ops[0].value), 1)
        ctx.setreg(ops[0].value, res)
        ctx.set_flags(flags)
    elif tag == "unary":
        a = ctx.reg(ops[0].value)
        if mnem == "NEG":
            res, flags = ctx.alu("SUB", 0, a)
        else:
            res, flags = ctx.alu("NOT", a, 0)
        ctx.setreg(ops[0].value, res)
        ctx.set_flags(flags)

    # vector forms
    elif tag == "vunary_amount":
        amount = ctx.val(ops[0])
        op = kernels.OP_ADD if mnem == "INC" else kernels.OP_SUB
        for index in ctx.selection(ops[1].value, ops[2].value):
            res, _ = kernels.alu_op(op, ctx.reg(index), amount, ctx.width)
            ctx.setreg(index, res)
    elif tag == "vunary":
        for index in ctx.selection(ops[0].value, ops[1].value):
            a = ctx.reg(index)
            res = ((-a) if mnem == "NEG" else ~a) & m.reg_mask
            ctx.setreg(index, res)
    elif tag == "vprefix":
        vector_prefix(ctx, mnem, ops[0].value, ops[1].value, ops[2].value,
                      ops[3].value, ops[4].value)
    elif tag == "bitprefix":
        bit_prefix(ctx, mnem, ops[0].value, ops[1].value, ops[2].value,
                   ops[3].value)
    elif tag == "vmove":
        vector_move(ctx, [op.value for op in ops[:4]], ops[4].value)
    elif tag == "shift":
        amount = ctx.val(ops[1])
        ctx.setreg(ops[0].value,
                   _shifted(ctx.reg(ops[0].value), mnem, amount, ctx.width))
    elif tag == "vshift":
        vector_shift(ctx, mnem, ctx.val(ops[0]), ops[1].value, ops[2].value)
    elif tag == "mov":
        ctx.setreg(ops[0].value, ctx.val(ops[1]))
    elif tag == "swp":
        a, b = ctx.reg(ops[0].value), ctx.reg(ops[1].value)
        ctx.setreg(ops[0].value, b)
        ctx.setreg(ops[1].value, a)
    elif tag == "vswap":
        width = ops[0].value
        for index in ctx.selection(ops[1].value, ops[2].value):
            ctx.setreg(index, _block_swap(ctx.reg(index), width, ctx.width,
                                          ctx))
    elif tag == "shv":
        ctx.setreg(ops[0].value,
                   _shuffle(ctx.reg(ops[0].value), ops[1].value, ctx.width,
                            ctx))
    elif tag == "vshuffle":
        width = ops[0].value
        for index in ctx.selection(ops[1].value, ops[2].value):
            ctx.setreg(index, _shuffle(ctx.reg(index), width, ctx.width, ctx))

    # control flow
    elif tag == "jmp":
        return _branch_target(ctx, ops[0])
    elif tag in ("beq", "bne", "blt", "bge"):
        flags = ctx.machine.flags
        taken = {
            "beq": flags.z,
            "bne": not flags.z,
            "blt": flags.n != flags.v,
            "bge": flags.n == flags.v,
        }[tag]
        if taken:
            return _branch_target(ctx, ops[0])
    elif tag == "jsr":
        target = _branch_target(ctx, ops[0])
        m.stack_push(next_pc)
        return target
    elif tag == "rts":
        address = m.stack_pop()
        if address not in ctx.entry.addr_to_offset:
            raise ctx.fault(
                f"return address {address} is not an instruction boundary",
                BadTarget)
        return address
    elif tag == "psh":
        m.stack_push(ctx.val(ops[0]))
    elif tag == "pop":
        ctx.setreg(ops[0].value, m.stack_pop())

    # input / output
    elif tag == "inp":
        if not m.input_queue:
            result.waiting = True
            return None
        ctx.setreg(ops[0].value, m.input_queue.popleft())
    elif tag == "out":
        text = render_value(ctx.val(ops[0]), ctx.width, m.output_base)
        m.output_log.append(text + "\n")

    # graphics
    elif tag == "stf":
        screen.stf(m, d.form.index, [ctx.val(op) for op in ops])
    elif tag in ("clf", "cpf", "mvf", "swf", "rtf", "flf", "scf", "svf",
                 "ldf", "chf"):
        getattr(screen, tag)(m, *[ctx.val(op) for op in ops])
    else:
        raise ctx.fault(f"no executor for semantics tag {tag!r}")
    return None


def _branch_target(ctx, operand) -> int:
    offset = ctx.val(operand)
    address = ctx.entry.offset_to_addr.get(offset)
    if address is None:
        raise ctx.fault(f"branch target offset {offset} is not an "
                        "instruction boundary", BadTarget)
    return address


# ---------------------------------------------------------- vector semantics

def vector_prefix(ctx, mnemonic, dest_mask, src_mask, domain, direction,
                  window):
    """Prefix combination over a source selection, scattered by rank."""
    if direction not in (0, 1):
        raise ctx.fault(f"prefix direction {direction} must be 0 or 1")
    dest = ctx.selection(dest_mask, window)
    src = ctx.selection(src_mask, window)
    if len(dest) != len(src):
        raise ctx.fault(
            f"destination selects {len(dest)} registers but source "
            f"{len(src)}", SelectionMismatch)
    values = [ctx.reg(i) for i in src]  # all reads precede all writes
    try:
        out = kernels.prefix_scan(values, _ALU_OPS[mnemonic], domain,
                                  direction, ctx.width)
    except ValueError as err:
        raise ctx.fault(str(err), DomainMismatch) from None
    for index, value in zip(dest, out):
        ctx.setreg(index, value)


def bit_prefix(ctx, mnemonic, rx, ry, split, direction):
    """Prefix combination over the bits of Ry, written to Rx."""
    if direction not in (0, 1):
        raise ctx.fault(f"prefix direction {direction} must be 0 or 1")
    try:
        res = kernels.bit_prefix(ctx.reg(ry), ctx.width, split, direction,
                                 _ALU_OPS[mnemonic])
    except ValueError as err:
        raise ctx.fault(str(err), DomainMismatch) from None
    ctx.setreg(rx, res)


def vector_move(ctx, rows, window):
    """Concurrent register copies described by incidence-matrix rows."""
    base = 8 * window
    moves = []
    for r, row in enumerate(rows):
        if row == 0:
            continue
        if row & (row - 1):
            raise ctx.fault(
                f"incidence row {r} value {row:08b} selects more than one "
                "source", MalformedRow)
        col = 7 - (row.bit_length() - 1)
        moves.append((base + r, base + col))
    values = {src: ctx.reg(src) for _, src in moves}  # snapshot sources
    for dst, src in moves:
        ctx.setreg(dst, values[src])


def vector_shift(ctx, mnemonic, amount, mask, window):
    """Selected registers concatenate (ascending, high first) into one
    bit string that is shifted or rotated, then redistributed."""
    sel = ctx.selection(mask, window)
    n = len(sel)
    if n == 0:
        return
    w = ctx.width
    total = n * w
    value = 0
    for index in sel:
        value = (value << w) | ctx.reg(index)
    if mnemonic in ("ROL", "ROR"):
        amount %= total
    shifted = _shift_bits(value, mnemonic, amount, total)
    for pos, index in enumerate(sel):
        ctx.setreg(index, (shifted >> ((n - 1 - pos) * w)) & ((1 << w) - 1))


def _shift_bits(value, mnemonic, amount, width):
    mask = (1 << width) - 1
    if mnemonic == "SHL":
        return (value << amount) & mask if amount < width else 0
    if mnemonic == "SHR":
        return value >> amount if amount < width else 0
    if mnemonic == "ROL":
        amount %= width
        return ((value << amount) | (value >> (width - amount))) & mask \
            if amount else value
    amount %= width
    return ((value >> amount) | (value << (width - amount))) & mask \
        if amount else value


def _shifted(value, mnemonic, amount, width):
    if mnemonic in ("ROL", "ROR"):
        amount %= width
    elif amount >= width:
        return 0
    return _shift_bits(value, mnemonic, amount, width)


def _block_swap(value, field_bits, width, ctx):
    """Exchange adjacent field_bits-wide blocks inside one register."""
    if field_bits < 1 or width % (2 * field_bits):
        raise ctx.fault(
            f"swap width {field_bits} must pair-partition {width} bits",
            DomainMismatch)
    count = width // field_bits
    fmask = (1 << field_bits) - 1
    fields = [(value >> ((count - 1 - i) * field_bits)) & fmask
              for i in range(count)]
    for i in range(0, count, 2):
        fields[i], fields[i + 1] = fields[i + 1], fields[i]
    out = 0
    for f in fields:
        out = (out << field_bits) | f
    return out


def _shuffle(value, field_bits, width, ctx):
    """Perfect shuffle of field_bits-wide blocks: halves interleave."""
    if field_bits < 1 or width % field_bits or (width // field_bits) % 2:
        raise ctx.fault(
            f"shuffle width {field_bits} must split {width} bits into an "
            "even number of fields", DomainMismatch)
    count = width // field_bits
    fmask = (1 << field_bits) - 1
    fields = [(value >> ((count - 1 - i) * field_bits)) & fmask
              for i in range(count)]
    half = count // 2
    inter = []
    for i in range(half):
        inter.append(fields[i])
        inter.append(fields[half + i])
    out = 0
    for f in inter:
        out = (out << field_bits) | f
    return out
