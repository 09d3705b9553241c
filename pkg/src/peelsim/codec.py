"""Assembler and disassembler for the variable-length object format.

Statements end with ';', '//' comments run to end of line, labels are
'name:' prefixes. Multi-byte operand values are always emitted most
significant byte first; data-memory endianness is a load/store concern,
not an object-code one.
"""

import re
from dataclasses import dataclass, field

from . import isa
from .errors import (
    AsmSyntaxError,
    BadObjectFile,
    DuplicateLabel,
    NoMatchingForm,
    OperandOutOfRange,
    TruncatedInstruction,
    UndefinedLabel,
    UnknownMnemonic,
    UnknownOpcode,
)
from .isa import Schema, TokKind

COLORS = {
    "BLACK": 0x000000FF,
    "WHITE": 0xFFFFFFFF,
    "RED": 0xFF0000FF,
    "GREEN": 0x00FF00FF,
    "BLUE": 0x0000FFFF,
    "YELLOW": 0xFFFF00FF,
    "CYAN": 0x00FFFFFF,
    "MAGENTA": 0xFF00FFFF,
    "GRAY": 0x808080FF,
    "ORANGE": 0xFF8000FF,
}

_REG_RE = re.compile(r"^[Rr](\d+)$")
_MASK_RE = re.compile(r"^[Xx][0-9A-Fa-f]{2}$")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<char>'(?:[^'\\]|\\.)')
      | (?P<hex>0[xX][0-9A-Fa-f]*)
      | (?P<num>-?\d+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<colon>:)
      | (?P<comma>,)
    )""",
    re.X,
)

_ESCAPES = {"n": 10, "t": 9, "r": 13, "0": 0, "\\": 92, "'": 39}


@dataclass
class Tok:
    kind: TokKind
    text: str
    value: int | None = None
    hex_bytes: int | None = None  # payload width carried by 0x literals


@dataclass
class Statement:
    labels: list
    mnemonic: str
    operands: list
    line: int


@dataclass
class SourceProgram:
    statements: list
    trailing_labels: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)


@dataclass
class InstrSpan:
    offset: int
    length: int
    line: int | None


@dataclass
class ObjectImage:
    data: bytes
    entry_offset: int = 0
    symbol_table: dict = field(default_factory=dict)
    instr_map: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


@dataclass(frozen=True)
class Geometry:
    """The two config-dependent operand widths the codec needs."""

    imm_bytes: int
    addr_bytes: int

    @classmethod
    def coerce(cls, obj) -> "Geometry":
        if isinstance(obj, Geometry):
            return obj
        return cls(obj.register_width_bits // 8, obj.address_width_bytes)


# --------------------------------------------------------------------- parse

def _split_statements(source: str):
    """Yield (text, line) per ';'-terminated statement; comments stripped."""
    out = []
    buf = []
    line = 1
    stmt_line = None
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            buf.append(" ")
        elif ch == "/" and i + 1 < n and source[i + 1] == "/":
            while i < n and source[i] != "\n":
                i += 1
            continue
        elif ch == "'":
            j = i + 1
            if j < n and source[j] == "\\":
                j += 2
            elif j < n:
                j += 1
            if j >= n or source[j] != "'":
                raise AsmSyntaxError("unterminated character literal",
                                     stmt_line or line)
            if stmt_line is None:
                stmt_line = line
            buf.append(source[i:j + 1])
            i = j
        elif ch == ";":
            out.append(("".join(buf).strip(), stmt_line or line))
            buf = []
            stmt_line = None
        else:
            buf.append(ch)
            if not ch.isspace() and stmt_line is None:
                stmt_line = line
        i += 1
    if "".join(buf).strip():
        raise AsmSyntaxError("statement missing ';' terminator", stmt_line)
    return out


def _lex(text: str, line: int):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise AsmSyntaxError(f"bad token near {text[pos:pos + 12]!r}", line)
        tokens.append((m.lastgroup, m.group(m.lastgroup).strip()))
        pos = m.end()
    return tokens


def _operand_token(kind: str, text: str, line: int) -> Tok:
    if kind == "char":
        body = text[1:-1]
        code = _ESCAPES.get(body[1], ord(body[1])) if body[0] == "\\" else ord(body)
        return Tok(TokKind.LIT, text, code)
    if kind == "hex":
        digits = text[2:]
        return Tok(TokKind.LIT, text, int(digits, 16) if digits else 0,
                   hex_bytes=(len(digits) + 1) // 2)
    if kind == "num":
        return Tok(TokKind.LIT, text, int(text, 10))
    # identifiers: register, mask, color constant, else label
    m = _REG_RE.match(text)
    if m:
        index = int(m.group(1))
        if index > 255:
            raise OperandOutOfRange(f"register R{index} beyond R255", line)
        return Tok(TokKind.REG, text, index)
    if _MASK_RE.match(text):
        return Tok(TokKind.MASK, text, int(text[1:], 16))
    if text.upper() in COLORS and text == text.upper():
        return Tok(TokKind.LIT, text, COLORS[text])
    return Tok(TokKind.LABEL, text)


def parse(source: str, config=None, collect: bool = False) -> SourceProgram:
    """Split source into statements; labels and token syntax checked here."""
    program = SourceProgram([])
    pending_labels = []
    seen_labels = set()

    def fail(err):
        if collect:
            program.diagnostics.append(str(err))
        else:
            raise err

    for text, line in _split_statements(source):
        if not text:
            continue
        try:
            tokens = _lex(text, line)
            pos = 0
            # leading 'name:' labels, possibly several
            while (pos + 1 < len(tokens) and tokens[pos][0] == "ident"
                   and tokens[pos + 1][0] == "colon"):
                name = tokens[pos][1]
                if _REG_RE.match(name) or _MASK_RE.match(name):
                    raise AsmSyntaxError(
                        f"label {name!r} conflicts with register/mask syntax",
                        line)
                if name in seen_labels:
                    raise DuplicateLabel(f"duplicate label {name!r}", line)
                seen_labels.add(name)
                pending_labels.append(name)
                pos += 2
            if pos == len(tokens):
                continue  # label-only statement binds to the next one
            if tokens[pos][0] != "ident":
                raise AsmSyntaxError(
                    f"expected a mnemonic, got {tokens[pos][1]!r}", line)
            mnemonic = tokens[pos][1].upper()
            pos += 1
            operands = []
            expect_operand = True
            while pos < len(tokens):
                tkind, ttext = tokens[pos]
                if expect_operand:
                    if tkind == "comma" or tkind == "colon":
                        raise AsmSyntaxError(f"unexpected {ttext!r}", line)
                    operands.append(_operand_token(tkind, ttext, line))
                    expect_operand = False
                else:
                    if tkind != "comma":
                        raise AsmSyntaxError(
                            f"expected ',' before {ttext!r}", line)
                    expect_operand = True
                pos += 1
            if expect_operand and operands:
                raise AsmSyntaxError("trailing ',' without an operand", line)
            program.statements.append(
                Statement(pending_labels, mnemonic, operands, line))
            pending_labels = []
        except (AsmSyntaxError, DuplicateLabel, OperandOutOfRange) as err:
            fail(err)
            pending_labels = []
    program.trailing_labels = pending_labels
    return program


# ------------------------------------------------------------------ assemble

def _spec_and_form(stmt: Statement):
    try:
        spec = isa.lookup_mnemonic(stmt.mnemonic)
    except UnknownMnemonic:
        raise UnknownMnemonic(
            f"line {stmt.line}: unknown mnemonic {stmt.mnemonic!r}") from None
    try:
        form = isa.select_form(spec, [t.kind for t in stmt.operands])
    except NoMatchingForm as err:
        raise NoMatchingForm(f"line {stmt.line}: {err}") from None
    return spec, form


def _is_bare(spec) -> bool:
    # HLT/NOP/RTS carry no extension byte at all
    return len(spec.forms) == 1 and spec.forms[0].arity == 0


def _payload_len(tok: Tok, line) -> int:
    if tok.value < 0:
        raise OperandOutOfRange(
            "length-prefixed immediate must be non-negative", line)
    if tok.hex_bytes is not None:
        length = max(tok.hex_bytes, 1)
    else:
        length = max(1, (tok.value.bit_length() + 7) // 8)
    if length > 0xFFFF:
        raise OperandOutOfRange("length-prefixed immediate too large", line)
    return length


def _measure(stmt: Statement, spec, form, geom: Geometry):
    bits = [isa.kind_bit(s, t.kind)
            for s, t in zip(form.schemas, stmt.operands)]
    length = 1 + (0 if _is_bare(spec) else form.ext_bytes)
    for schema, tok, bit in zip(form.schemas, stmt.operands, bits):
        width = _op_width(schema, bit, geom)
        if schema is Schema.LPIMM:
            width += _payload_len(tok, stmt.line)
        length += width
    return bits, length


def _op_width(schema: Schema, bit: int, geom: Geometry) -> int:
    if schema in (Schema.REG, Schema.MASK, Schema.LIT8):
        return 1
    if schema is Schema.RLIMM:
        return 1 if bit == 0 else geom.imm_bytes
    if schema is Schema.RLADDR:
        return 1 if bit == 0 else geom.addr_bytes
    return 2  # LPIMM length field


def assemble(program: SourceProgram, config) -> ObjectImage:
    """Two-pass assembly: offsets and labels first, bytes second."""
    geom = Geometry.coerce(config)
    spad_count = getattr(config, "spad_count", 256)
    plan = []
    labels = {}
    offset = 0
    for stmt in program.statements:
        spec, form = _spec_and_form(stmt)
        bits, length = _measure(stmt, spec, form, geom)
        for name in stmt.labels:
            labels[name] = offset
        plan.append((stmt, spec, form, bits, offset, length))
        offset += length
    for name in program.trailing_labels:
        labels[name] = offset

    out = bytearray()
    warnings = []
    instr_map = []
    for stmt, spec, form, bits, at, length in plan:
        out.append((spec.class_id << 4) | spec.opcode_for(form))
        if not _is_bare(spec):
            out.extend(isa.encode_extension(form, bits))
        for schema, tok, bit in zip(form.schemas, stmt.operands, bits):
            _emit_operand(out, schema, tok, bit, geom, labels, spad_count,
                          stmt.line, warnings)
        if len(out) - at != length:
            raise AssertionError(
                f"encoded length mismatch for {stmt.mnemonic} at {at}")
        instr_map.append(InstrSpan(at, length, stmt.line))
    return ObjectImage(bytes(out), 0, labels, instr_map, warnings)


def _emit_operand(out, schema, tok, bit, geom, labels, spad_count, line,
                  warnings):
    if bit == 0:  # register or mask, one byte
        if tok.kind is TokKind.REG and tok.value >= spad_count:
            raise OperandOutOfRange(
                f"register R{tok.value} beyond SPAD size {spad_count}", line)
        out.append(tok.value)
        return
    if schema is Schema.LPIMM:
        length = _payload_len(tok, line)
        out.extend(length.to_bytes(2, "big"))
        out.extend(tok.value.to_bytes(length, "big"))
        return
    width = _op_width(schema, 1, geom)
    if tok.kind is TokKind.LABEL:
        if tok.text not in labels:
            raise UndefinedLabel(f"undefined label {tok.text!r}", line)
        value = labels[tok.text]
        if value >= 1 << (8 * width):
            raise OperandOutOfRange(
                f"label {tok.text!r} offset {value} exceeds {width}-byte "
                "operand", line)
    else:
        value = tok.value
        if value >= 1 << (8 * width) or value < -(1 << (8 * width - 1)):
            warnings.append(
                (line, f"literal {tok.text} truncated to {width} byte(s)"))
        value %= 1 << (8 * width)
    out.extend(value.to_bytes(width, "big"))


# -------------------------------------------------------------------- decode

@dataclass
class DecodedOperand:
    schema: Schema
    bit: int
    value: int
    payload: bytes | None = None


@dataclass
class Decoded:
    spec: object
    form: object
    vector: bool
    operands: list
    offset: int
    length: int

    @property
    def mnemonic(self) -> str:
        return self.spec.mnemonic


def decode_at(read, offset: int, geom: Geometry) -> Decoded:
    """Decode one instruction via a byte-reader callable."""

    def byte(i):
        try:
            return read(i)
        except (IndexError, KeyError):
            raise TruncatedInstruction(
                f"instruction at offset {offset} runs past the end") from None

    b0 = byte(offset)
    class_id, opcode = b0 >> 4, b0 & 0xF
    try:
        spec = isa.lookup_code(class_id, opcode)
    except UnknownOpcode:
        raise UnknownOpcode(
            f"offset {offset}: undecodable byte 0x{b0:02X}") from None
    vector = isa.is_vector_opcode(spec, opcode)
    if _is_bare(spec):
        return Decoded(spec, spec.forms[0], vector, [], offset, 1)
    ext1 = byte(offset + 1)
    form = spec.form_by_index(ext1 >> 4, vector)
    if form is None:
        raise UnknownOpcode(
            f"offset {offset}: {spec.mnemonic} has no "
            f"{'vector' if vector else 'scalar'} form {ext1 >> 4}")
    bits = [(ext1 >> (3 - i)) & 1 for i in range(min(4, form.arity))]
    if form.arity < 4 and ext1 & ((1 << (4 - form.arity)) - 1):
        raise UnknownOpcode(f"offset {offset}: stray extension kind bits")
    cursor = offset + 2
    if form.ext_bytes == 2:
        ext2 = byte(offset + 2)
        bits += [(ext2 >> (7 - i)) & 1 for i in range(form.arity - 4)]
        if ext2 & 0xF or ext2 & ((1 << (8 - (form.arity - 4))) - 1) & 0xF0:
            raise UnknownOpcode(f"offset {offset}: stray extension kind bits")
        cursor += 1
    operands = []
    for schema, bit in zip(form.schemas, bits):
        if schema in (Schema.REG, Schema.MASK) and bit != 0:
            raise UnknownOpcode(
                f"offset {offset}: kind bit conflicts with {schema.value}")
        if schema in (Schema.LIT8, Schema.LPIMM) and bit != 1:
            raise UnknownOpcode(
                f"offset {offset}: kind bit conflicts with {schema.value}")
        if schema is Schema.LPIMM:
            length = (byte(cursor) << 8) | byte(cursor + 1)
            cursor += 2
            payload = bytes(byte(cursor + i) for i in range(length))
            cursor += length
            operands.append(DecodedOperand(
                schema, 1, int.from_bytes(payload, "big") if payload else 0,
                payload))
            continue
        width = _op_width(schema, bit, geom)
        value = 0
        for i in range(width):
            value = (value << 8) | byte(cursor + i)
        cursor += width
        operands.append(DecodedOperand(schema, bit, value))
    return Decoded(spec, form, vector, operands, offset, cursor - offset)


def decode_stream(data: bytes, geom: Geometry):
    """Decode a flat byte string instruction by instruction."""
    decoded = []
    offset = 0
    while offset < len(data):
        d = decode_at(lambda i: data[i], offset, geom)
        decoded.append(d)
        offset += d.length
    return decoded


def image_from_bytes(data: bytes, config_or_geom) -> ObjectImage:
    """Wrap raw machine code: the instruction map is recovered by decoding."""
    geom = Geometry.coerce(config_or_geom)
    spans = [InstrSpan(d.offset, d.length, None)
             for d in decode_stream(data, geom)]
    return ObjectImage(bytes(data), 0, {}, spans, [])


# --------------------------------------------------------------- disassembly

def _branch_label_map(decoded):
    boundaries = {d.offset for d in decoded}
    targets = set()
    for d in decoded:
        if d.spec.class_id != isa.CLASS_BRANCH:
            continue
        for op in d.operands:
            if op.schema is Schema.RLADDR and op.bit == 1 \
                    and op.value in boundaries:
                targets.add(op.value)
    return {t: f"L{k}" for k, t in enumerate(sorted(targets))}


def _render_operand(op: DecodedOperand, is_branch: bool, labels) -> str:
    if op.bit == 0:
        if op.schema is Schema.MASK:
            return f"X{op.value:02X}"
        return f"R{op.value}"
    if op.schema is Schema.LPIMM:
        return "0x" + (op.payload.hex().upper() if op.payload else "00")
    if is_branch and op.schema is Schema.RLADDR and op.value in labels:
        return labels[op.value]
    return str(op.value)


def _render_lines(decoded, labels):
    lines = []
    for d in decoded:
        is_branch = d.spec.class_id == isa.CLASS_BRANCH
        parts = [_render_operand(op, is_branch, labels) for op in d.operands]
        text = d.mnemonic + (" " + ",".join(parts) if parts else "") + ";"
        if d.offset in labels:
            text = f"{labels[d.offset]}: {text}"
        lines.append(text)
    return "\n".join(lines) + ("\n" if lines else "")


def render_instruction(decoded: Decoded) -> str:
    """Canonical text of one decoded instruction, labels left numeric."""
    is_branch = decoded.spec.class_id == isa.CLASS_BRANCH
    parts = [_render_operand(op, is_branch, {}) for op in decoded.operands]
    return decoded.mnemonic + (" " + ",".join(parts) if parts else "") + ";"


def disassemble(data, config_or_geom) -> str:
    """Canonical text for an ObjectImage or a raw byte string."""
    geom = Geometry.coerce(config_or_geom)
    raw = data.data if isinstance(data, ObjectImage) else bytes(data)
    decoded = decode_stream(raw, geom)
    return _render_lines(decoded, _branch_label_map(decoded))


def canonical(program: SourceProgram, config) -> str:
    """Canonical rendering of parsed source without an encode round trip.

    Matches disassemble(assemble(program)) by construction: labels are
    renamed L0, L1, ... in target order and literal operand values are
    shown after width reduction.
    """
    geom = Geometry.coerce(config)
    plan = []
    labels = {}
    offset = 0
    for stmt in program.statements:
        spec, form = _spec_and_form(stmt)
        bits, length = _measure(stmt, spec, form, geom)
        for name in stmt.labels:
            labels[name] = offset
        plan.append((stmt, spec, form, bits, offset, length))
        offset += length
    for name in program.trailing_labels:
        labels[name] = offset

    boundaries = {entry[4] for entry in plan}
    targets = set()
    resolved = []
    for stmt, spec, form, bits, at, _ in plan:
        ops = []
        is_branch = spec.class_id == isa.CLASS_BRANCH
        for schema, tok, bit in zip(form.schemas, stmt.operands, bits):
            if bit == 0:
                ops.append(DecodedOperand(schema, 0, tok.value))
                continue
            if schema is Schema.LPIMM:
                payload = tok.value.to_bytes(_payload_len(tok, stmt.line),
                                             "big")
                ops.append(DecodedOperand(schema, 1,
                                          tok.value, payload))
                continue
            width = _op_width(schema, 1, geom)
            if tok.kind is TokKind.LABEL:
                if tok.text not in labels:
                    raise UndefinedLabel(
                        f"undefined label {tok.text!r}", stmt.line)
                value = labels[tok.text]
            else:
                value = tok.value % (1 << (8 * width))
            if is_branch and schema is Schema.RLADDR and value in boundaries:
                targets.add(value)
            ops.append(DecodedOperand(schema, 1, value))
        resolved.append((spec, at, is_branch, ops))

    names = {t: f"L{k}" for k, t in enumerate(sorted(targets))}
    lines = []
    for spec, at, is_branch, ops in resolved:
        parts = [_render_operand(op, is_branch, names) for op in ops]
        text = spec.mnemonic + (" " + ",".join(parts) if parts else "") + ";"
        if at in names:
            text = f"{names[at]}: {text}"
        lines.append(text)
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------- numeric listings

def _dec_digits(length: int) -> int:
    return len(str((1 << (8 * length)) - 1))


def _digit_count(length: int, base: str) -> int:
    if base == "bin":
        return 8 * length
    if base == "oct":
        return (8 * length + 2) // 3
    if base == "hex":
        return 2 * length
    if base == "dec":
        return _dec_digits(length)
    raise ValueError(f"unknown base {base!r}")


def render_numeric(image: ObjectImage, base: str) -> str:
    """One line of digits per instruction, re-readable by read_numeric."""
    fmt = {"bin": "b", "oct": "o", "hex": "X", "dec": "d"}[base]
    lines = []
    for span in image.instr_map:
        chunk = image.data[span.offset:span.offset + span.length]
        value = int.from_bytes(chunk, "big")
        lines.append(format(value, f"0{_digit_count(span.length, base)}{fmt}"))
    return "\n".join(lines) + ("\n" if lines else "")


def _length_for_digits(digits: int, base: str) -> int:
    if base == "bin":
        if digits % 8 == 0:
            return digits // 8
    elif base == "hex":
        if digits % 2 == 0:
            return digits // 2
    elif base == "oct":
        length = digits * 3 // 8
        if length and _digit_count(length, "oct") == digits:
            return length
    elif base == "dec":
        length = max(1, int(digits / 2.5))
        while _dec_digits(length) < digits:
            length += 1
        if _dec_digits(length) == digits:
            return length
    raise BadObjectFile(
        f"line width {digits} is not a canonical {base} instruction width")


def read_numeric(text: str, base: str, config_or_geom) -> ObjectImage:
    """Inverse of render_numeric: digit lines back to an object image."""
    radix = {"bin": 2, "oct": 8, "dec": 10, "hex": 16}[base]
    raw = bytearray()
    for lineno, line in enumerate(text.splitlines(), start=1):
        digits = "".join(line.split())
        if not digits:
            continue
        length = _length_for_digits(len(digits), base)
        try:
            value = int(digits, radix)
        except ValueError:
            raise BadObjectFile(f"line {lineno}: bad {base} digits") from None
        if value >> (8 * length):
            raise BadObjectFile(f"line {lineno}: value too wide")
        raw.extend(value.to_bytes(length, "big"))
    return image_from_bytes(bytes(raw), config_or_geom)


# ------------------------------------------------------------- object files

CAPO_MAGIC = b"CAPO"
CAPO_VERSION = 1


def write_capo(image: ObjectImage, config) -> bytes:
    """Serialize an image: magic, version, fingerprint, code, symbols."""
    geom = Geometry.coerce(config)
    out = bytearray(CAPO_MAGIC)
    out.append(CAPO_VERSION)
    out.append(geom.imm_bytes * 8)
    out.append(geom.addr_bytes)
    out.extend(image.entry_offset.to_bytes(4, "big"))
    out.extend(len(image.data).to_bytes(4, "big"))
    out.extend(image.data)
    symbols = sorted(image.symbol_table.items())
    out.extend(len(symbols).to_bytes(2, "big"))
    for name, offset in symbols:
        encoded = name.encode("utf-8")
        out.extend(len(encoded).to_bytes(2, "big"))
        out.extend(encoded)
        out.extend(offset.to_bytes(4, "big"))
    return bytes(out)


def read_capo(blob: bytes):
    """Parse a CAPO container; returns (image, register_bits, address_bytes)."""
    if blob[:4] != CAPO_MAGIC:
        raise BadObjectFile("not a CAPO object file")
    if blob[4] != CAPO_VERSION:
        raise BadObjectFile(f"unsupported CAPO version {blob[4]}")
    w_bits, a_bytes = blob[5], blob[6]
    if w_bits not in (8, 16, 32, 64) or not 1 <= a_bytes <= 8:
        raise BadObjectFile("corrupt config fingerprint")
    entry = int.from_bytes(blob[7:11], "big")
    code_len = int.from_bytes(blob[11:15], "big")
    code_end = 15 + code_len
    if code_end > len(blob):
        raise BadObjectFile("truncated code section")
    code = blob[15:code_end]
    pos = code_end
    count = int.from_bytes(blob[pos:pos + 2], "big")
    pos += 2
    symbols = {}
    for _ in range(count):
        name_len = int.from_bytes(blob[pos:pos + 2], "big")
        pos += 2
        name = blob[pos:pos + name_len].decode("utf-8")
        pos += name_len
        symbols[name] = int.from_bytes(blob[pos:pos + 4], "big")
        pos += 4
    geom = Geometry(w_bits // 8, a_bytes)
    spans = [InstrSpan(d.offset, d.length, None)
             for d in decode_stream(code, geom)]
    return ObjectImage(code, entry, symbols, spans, []), w_bits, a_bytes


def assemble_source(source: str, config) -> ObjectImage:
    """Convenience wrapper: parse then assemble."""
    return assemble(parse(source), config)
