"""Instruction repertoire: mnemonics, class ids, opcodes, overload forms.

Encoding layout (normative for the whole toolkit):

    byte 0   : class_id[7:4] | opcode[3:0]
    ext byte : form_index[7:4] | kind bits for operands 1..4 in [3:0],
               operand 1 in bit 3 (kind 0 = register/mask, 1 = literal)
    ext byte2: present iff the form has >= 5 operands; kind bits for
               operands 5..8 in [7:4] (operand 5 in bit 7), [3:0] zero
    operands : REG/MASK/LIT8 one byte; RLIMM literal W/8 bytes; RLADDR
               literal A bytes; LPIMM 2-byte length then payload.
               Multi-byte values are most-significant-byte first.

Zero-operand mnemonics (HLT, NOP, RTS) carry no extension byte at all.
Vector-capable mnemonics hold two opcodes; the vector one is the scalar
opcode with its most significant bit forced to 1.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import NoMatchingForm, UnknownMnemonic, UnknownOpcode

# Class ids (4-bit).
CLASS_LOAD = 0b0000
CLASS_STORE = 0b0001
CLASS_ARITH = 0b0010
CLASS_LOGIC = 0b0011
CLASS_SHIFT = 0b0100
CLASS_MOVE = 0b0101
CLASS_BRANCH = 0b0110
CLASS_STACK = 0b0111
CLASS_GRAPHICS = 0b1000
CLASS_IO = 0b1001
CLASS_CONTROL = 0b1111

CLASS_NAMES = {
    CLASS_LOAD: "LOAD",
    CLASS_STORE: "STORE",
    CLASS_ARITH: "ARITH",
    CLASS_LOGIC: "LOGIC",
    CLASS_SHIFT: "SHIFT",
    CLASS_MOVE: "MOVE",
    CLASS_BRANCH: "BRANCH",
    CLASS_STACK: "STACK",
    CLASS_GRAPHICS: "GRAPHICS",
    CLASS_IO: "IO",
    CLASS_CONTROL: "CONTROL",
}


class Schema(Enum):
    """Per-position operand schema; decides the encoded width."""

    REG = "reg"        # register index, 1 byte, kind bit 0
    MASK = "mask"      # 8-bit selection mask, 1 byte, kind bit 0
    RLIMM = "reg|imm"  # register (1 byte) or W/8-byte immediate / label
    RLADDR = "reg|addr"  # register (1 byte) or A-byte address / label
    LIT8 = "lit8"      # 1-byte literal (window, layer, angle index, ...)
    LPIMM = "lpimm"    # 2-byte big-endian length, then that many bytes


class TokKind(Enum):
    """How the assembler classified one operand token."""

    REG = "reg"
    MASK = "mask"
    LIT = "lit"
    LABEL = "label"


# Which token kinds each schema position accepts, and the encoded kind bit.
_ACCEPTS = {
    Schema.REG: {TokKind.REG},
    Schema.MASK: {TokKind.MASK},
    Schema.RLIMM: {TokKind.REG, TokKind.LIT, TokKind.LABEL},
    Schema.RLADDR: {TokKind.REG, TokKind.LIT, TokKind.LABEL},
    Schema.LIT8: {TokKind.LIT},
    Schema.LPIMM: {TokKind.LIT},
}


def kind_bit(schema: Schema, tok: TokKind) -> int:
    """0 encodes a register/mask operand, 1 a literal of the schema width."""
    return 0 if tok in (TokKind.REG, TokKind.MASK) else 1


def operand_width(schema: Schema, bit: int, config) -> int:
    """Encoded byte width of one operand (LPIMM payload excluded)."""
    if schema in (Schema.REG, Schema.MASK, Schema.LIT8):
        return 1
    if schema is Schema.RLIMM:
        return 1 if bit == 0 else config.register_width_bits // 8
    if schema is Schema.RLADDR:
        return 1 if bit == 0 else config.address_width_bytes
    return 2  # LPIMM: the length field; payload follows


@dataclass(frozen=True)
class Form:
    """One overload of a mnemonic."""

    index: int                 # 4-bit selector stored in the extension
    vector: bool               # encoded with the vector opcode
    schemas: tuple             # Schema per operand position
    tag: str                   # semantics tag dispatched by the engine
    names: tuple               # operand names for synopses and docs

    @property
    def arity(self) -> int:
        return len(self.schemas)

    @property
    def ext_bytes(self) -> int:
        return 2 if self.arity >= 5 else 1

    def synopsis(self, mnemonic: str) -> str:
        parts = []
        for schema, name in zip(self.schemas, self.names):
            if schema in (Schema.RLIMM, Schema.RLADDR):
                parts.append(f"{name}/value")
            else:
                parts.append(name)
        return mnemonic + (" " + ", ".join(parts) if parts else "")


@dataclass(frozen=True)
class InstructionSpec:
    """Static description of one mnemonic."""

    mnemonic: str
    class_id: int
    scalar_opcode: int
    vector_opcode: int | None
    forms: tuple

    def form_by_index(self, index: int, vector: bool):
        for f in self.forms:
            if f.index == index and f.vector == vector:
                return f
        return None

    def opcode_for(self, form: Form) -> int:
        return self.vector_opcode if form.vector else self.scalar_opcode


def _f(index, schemas, tag, names, vector=False):
    return Form(index, vector, tuple(schemas), tag, tuple(names))


S = Schema
_ALU2 = _f(1, [S.REG, S.RLIMM], "alu2", ["Rx", "Ry"])
_ALU3 = _f(2, [S.REG, S.RLIMM, S.RLIMM], "alu3", ["Rx", "Ry", "Rz"])


def _alu_forms(bit_prefix: bool, prefix: bool):
    forms = [_ALU2, _ALU3]
    if bit_prefix:
        forms.append(_f(3, [S.REG, S.REG, S.LIT8, S.LIT8], "bitprefix",
                        ["Rx", "Ry", "split", "direction"]))
    if prefix:
        forms.append(_f(4, [S.MASK, S.MASK, S.LIT8, S.LIT8, S.LIT8], "vprefix",
                        ["dest-set", "src-set", "domain", "direction", "window"],
                        vector=True))
    return forms


_VUNARY_AMT = _f(2, [S.RLIMM, S.MASK, S.LIT8], "vunary_amount",
                 ["amount", "set", "window"], vector=True)
_VUNARY = _f(2, [S.MASK, S.LIT8], "vunary", ["set", "window"], vector=True)
_SHIFT_FORMS = [
    _f(1, [S.REG, S.RLIMM], "shift", ["Rx", "amount"]),
    _f(2, [S.RLIMM, S.MASK, S.LIT8], "vshift", ["amount", "set", "window"],
       vector=True),
]

# mnemonic -> (class id, scalar opcode, vector opcode, forms)
_TABLE = {
    # LOAD
    "LDI": (CLASS_LOAD, 0b0000, 0b1000, [
        _f(1, [S.REG, S.RLIMM], "ldi", ["Rx", "value"]),
        _f(2, [S.RLIMM, S.MASK, S.LIT8], "vldi", ["value", "set", "window"],
           vector=True),
    ]),
    "LDA": (CLASS_LOAD, 0b0001, None, [
        _f(1, [S.REG, S.RLADDR], "lda", ["Rx", "address"]),
    ]),
    "LDR": (CLASS_LOAD, 0b0010, None, [
        _f(1, [S.REG, S.REG], "ldr", ["Rx", "Ry"]),
    ]),
    "LDX": (CLASS_LOAD, 0b0011, None, [
        _f(1, [S.REG, S.RLADDR, S.REG], "ldx", ["Rx", "address", "Ry"]),
    ]),
    # STORE
    "STI": (CLASS_STORE, 0b0000, None, [
        _f(1, [S.RLADDR, S.LPIMM], "sti", ["address", "value"]),
    ]),
    "STA": (CLASS_STORE, 0b0001, None, [
        _f(1, [S.REG, S.RLADDR], "sta", ["Rx", "address"]),
    ]),
    "STR": (CLASS_STORE, 0b0010, None, [
        _f(1, [S.REG, S.REG], "str", ["Rx", "Ry"]),
    ]),
    # ARITH
    "ADD": (CLASS_ARITH, 0b0000, 0b1000, _alu_forms(False, True)),
    "SUB": (CLASS_ARITH, 0b0001, 0b1001, _alu_forms(False, True)),
    "MUL": (CLASS_ARITH, 0b0010, 0b1010, _alu_forms(False, True)),
    "DIV": (CLASS_ARITH, 0b0011, None, _alu_forms(False, False)),
    "INC": (CLASS_ARITH, 0b0100, 0b1100, [
        _f(1, [S.REG], "incdec", ["Rx"]), _VUNARY_AMT,
    ]),
    "DEC": (CLASS_ARITH, 0b0101, 0b1101, [
        _f(1, [S.REG], "incdec", ["Rx"]), _VUNARY_AMT,
    ]),
    "NEG": (CLASS_ARITH, 0b0110, 0b1110, [
        _f(1, [S.REG], "unary", ["Rx"]), _VUNARY,
    ]),
    # Vector CMP is deliberately absent: replication semantics for a
    # flags-only operation are unresolved, so only the scalar form exists.
    "CMP": (CLASS_ARITH, 0b0111, None, [
        _f(1, [S.REG, S.RLIMM], "cmp", ["Rx", "Ry"]),
    ]),
    # LOGIC
    "IOR": (CLASS_LOGIC, 0b0000, 0b1000, _alu_forms(True, True)),
    "AND": (CLASS_LOGIC, 0b0001, 0b1001, _alu_forms(True, True)),
    "XOR": (CLASS_LOGIC, 0b0010, 0b1010, _alu_forms(True, True)),
    "NOT": (CLASS_LOGIC, 0b0011, 0b1011, [
        _f(1, [S.REG], "unary", ["Rx"]), _VUNARY,
    ]),
    # SHIFT
    "SHL": (CLASS_SHIFT, 0b0000, 0b1000, _SHIFT_FORMS),
    "SHR": (CLASS_SHIFT, 0b0001, 0b1001, _SHIFT_FORMS),
    "ROL": (CLASS_SHIFT, 0b0010, 0b1010, _SHIFT_FORMS),
    "ROR": (CLASS_SHIFT, 0b0011, 0b1011, _SHIFT_FORMS),
    # MOVE
    "MOV": (CLASS_MOVE, 0b0000, 0b1000, [
        _f(1, [S.REG, S.RLIMM], "mov", ["Rx", "Ry"]),
        _f(2, [S.LIT8, S.LIT8, S.LIT8, S.LIT8, S.LIT8], "vmove",
           ["row0", "row1", "row2", "row3", "window"], vector=True),
    ]),
    "SWP": (CLASS_MOVE, 0b0001, 0b1001, [
        _f(1, [S.REG, S.REG], "swp", ["Rx", "Ry"]),
        _f(2, [S.LIT8, S.MASK, S.LIT8], "vswap", ["width", "set", "window"],
           vector=True),
    ]),
    "SHV": (CLASS_MOVE, 0b0010, 0b1010, [
        _f(1, [S.REG, S.LIT8], "shv", ["Rx", "width"]),
        _f(2, [S.LIT8, S.MASK, S.LIT8], "vshuffle", ["width", "set", "window"],
           vector=True),
    ]),
    # BRANCH
    "JMP": (CLASS_BRANCH, 0b0000, None, [_f(1, [S.RLADDR], "jmp", ["target"])]),
    "BEQ": (CLASS_BRANCH, 0b0001, None, [_f(1, [S.RLADDR], "beq", ["target"])]),
    "BNE": (CLASS_BRANCH, 0b0010, None, [_f(1, [S.RLADDR], "bne", ["target"])]),
    "BLT": (CLASS_BRANCH, 0b0011, None, [_f(1, [S.RLADDR], "blt", ["target"])]),
    "BGE": (CLASS_BRANCH, 0b0100, None, [_f(1, [S.RLADDR], "bge", ["target"])]),
    "JSR": (CLASS_BRANCH, 0b0101, None, [_f(1, [S.RLADDR], "jsr", ["target"])]),
    "RTS": (CLASS_BRANCH, 0b0110, None, [_f(1, [], "rts", [])]),
    # STACK
    "PSH": (CLASS_STACK, 0b0000, None, [_f(1, [S.RLIMM], "psh", ["value"])]),
    "POP": (CLASS_STACK, 0b0001, None, [_f(1, [S.REG], "pop", ["Rx"])]),
    # GRAPHICS
    "STF": (CLASS_GRAPHICS, 0b0000, None, [
        _f(1, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM], "stf",
           ["x", "y", "width", "color"]),
        _f(2, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8], "stf",
           ["x", "y", "width", "color", "layer"]),
        _f(3, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8], "stf",
           ["x", "y", "width", "height", "color", "layer"]),
        _f(4, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8],
           "stf", ["x", "y", "width", "height", "angle", "color", "layer"]),
        _f(5, [S.RLIMM, S.RLIMM, S.LIT8, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM,
               S.LIT8], "stf",
           ["x", "y", "edges", "edge-width", "angle", "color", "border",
            "layer"]),
    ]),
    "CLF": (CLASS_GRAPHICS, 0b0001, None, [
        _f(1, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8], "clf",
           ["x", "y", "width", "height", "layer"]),
    ]),
    "CPF": (CLASS_GRAPHICS, 0b0010, None, [
        _f(1, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8,
               S.LIT8], "cpf",
           ["x", "y", "width", "height", "dest-x", "dest-y", "layer",
            "dest-layer"]),
    ]),
    "MVF": (CLASS_GRAPHICS, 0b0011, None, [
        _f(1, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8,
               S.LIT8], "mvf",
           ["x", "y", "width", "height", "dest-x", "dest-y", "layer",
            "dest-layer"]),
    ]),
    "SWF": (CLASS_GRAPHICS, 0b0100, None, [
        _f(1, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8,
               S.LIT8], "swf",
           ["x", "y", "width", "height", "x2", "y2", "layer", "layer2"]),
    ]),
    "RTF": (CLASS_GRAPHICS, 0b0101, None, [
        _f(1, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8], "rtf",
           ["x", "y", "width", "height", "angle", "layer"]),
    ]),
    "FLF": (CLASS_GRAPHICS, 0b0110, None, [
        _f(1, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8, S.LIT8], "flf",
           ["x", "y", "width", "height", "axis", "layer"]),
    ]),
    "SCF": (CLASS_GRAPHICS, 0b0111, None, [
        _f(1, [S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8, S.LIT8, S.LIT8],
           "scf", ["x", "y", "width", "height", "numer", "denom", "layer"]),
    ]),
    "LDF": (CLASS_GRAPHICS, 0b1000, None, [
        _f(1, [S.RLADDR, S.RLIMM, S.RLIMM, S.LIT8], "ldf",
           ["address", "x", "y", "layer"]),
    ]),
    "SVF": (CLASS_GRAPHICS, 0b1001, None, [
        _f(1, [S.RLADDR, S.RLIMM, S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8], "svf",
           ["address", "x", "y", "width", "height", "layer"]),
    ]),
    "CHF": (CLASS_GRAPHICS, 0b1010, None, [
        _f(1, [S.RLIMM, S.RLIMM, S.RLIMM, S.LIT8, S.RLIMM, S.LIT8], "chf",
           ["x", "y", "char", "size", "color", "layer"]),
    ]),
    # IO
    "INP": (CLASS_IO, 0b0000, None, [_f(1, [S.REG], "inp", ["Rx"])]),
    "OUT": (CLASS_IO, 0b0001, None, [_f(1, [S.RLIMM], "out", ["value"])]),
    # CONTROL
    "NOP": (CLASS_CONTROL, 0b0000, None, [_f(1, [], "nop", [])]),
    "HLT": (CLASS_CONTROL, 0b0001, None, [_f(1, [], "hlt", [])]),
}


def _build():
    by_name = {}
    by_code = {}
    for name, (cls, sc_op, vec_op, forms) in _TABLE.items():
        spec = InstructionSpec(name, cls, sc_op, vec_op, tuple(forms))
        by_name[name] = spec
        assert (cls, sc_op) not in by_code, name
        by_code[(cls, sc_op)] = spec
        if vec_op is not None:
            # Vector opcode law: scalar MSB clear, vector = scalar | 0b1000.
            assert sc_op < 0b1000 and vec_op == (sc_op | 0b1000), name
            assert (cls, vec_op) not in by_code, name
            by_code[(cls, vec_op)] = spec
        seen = set()
        for f in spec.forms:
            assert f.index not in seen, name
            seen.add(f.index)
            if f.vector:
                assert vec_op is not None, name
        # Form disjointness: arity alone selects the form for this table.
        arities = [f.arity for f in spec.forms]
        assert len(set(arities)) == len(arities), name
    return by_name, by_code


BY_NAME, BY_CODE = _build()
MNEMONICS = tuple(sorted(BY_NAME))


def lookup_mnemonic(name: str) -> InstructionSpec:
    spec = BY_NAME.get(name.upper())
    if spec is None:
        raise UnknownMnemonic(f"unknown mnemonic {name!r}")
    return spec


def lookup_code(class_id: int, opcode: int) -> InstructionSpec:
    spec = BY_CODE.get((class_id, opcode))
    if spec is None:
        raise UnknownOpcode(
            f"undefined instruction code class={class_id:04b} opcode={opcode:04b}")
    return spec


def is_vector_opcode(spec: InstructionSpec, opcode: int) -> bool:
    return spec.vector_opcode is not None and opcode == spec.vector_opcode


def select_form(spec: InstructionSpec, kinds) -> Form:
    """Pick the unique form matching the token-kind list of one statement."""
    candidates = [f for f in spec.forms if f.arity == len(kinds)]
    if not candidates:
        raise NoMatchingForm(
            f"{spec.mnemonic} has no form with {len(kinds)} operands")
    form = candidates[0]
    for pos, (schema, tok) in enumerate(zip(form.schemas, kinds), start=1):
        if tok not in _ACCEPTS[schema]:
            raise NoMatchingForm(
                f"{spec.mnemonic} form {form.index}: operand {pos} must be "
                f"{schema.value}, got {tok.value}")
    return form


def encode_extension(form: Form, bits) -> bytes:
    """Extension byte(s) for a form and its per-operand kind bits."""
    b1 = (form.index << 4)
    for i in range(min(4, len(bits))):
        b1 |= bits[i] << (3 - i)
    if form.ext_bytes == 1:
        return bytes([b1])
    b2 = 0
    for i in range(4, len(bits)):
        b2 |= bits[i] << (7 - (i - 4))
    return bytes([b1, b2])


def decode_extension(form_arity_lookup, data) -> tuple:
    """Split extension bytes back into (form_index, kind bit list).

    `form_arity_lookup(index)` returns the arity for a candidate form index
    so the decoder knows whether a second byte follows; returns the number
    of bytes consumed as well.
    """
    b1 = data[0]
    index = b1 >> 4
    arity = form_arity_lookup(index)
    bits = [(b1 >> (3 - i)) & 1 for i in range(min(4, arity))]
    if arity < 5:
        return index, bits, 1
    b2 = data[1]
    bits += [(b2 >> (7 - i)) & 1 for i in range(arity - 4)]
    return index, bits, 2


def reference_records():
    """Machine-readable ISA reference, one record per mnemonic/form."""
    for name in MNEMONICS:
        spec = BY_NAME[name]
        for form in spec.forms:
            yield {
                "mnemonic": name,
                "category": CLASS_NAMES[spec.class_id],
                "class_id": f"{spec.class_id:04b}",
                "opcode": f"{spec.opcode_for(form):04b}",
                "form": form.index,
                "vector": form.vector,
                "operands": [s.value for s in form.schemas],
                "operand_names": list(form.names),
                "synopsis": form.synopsis(name),
            }
