"""Parser, assembler, disassembler and object-format behavior."""

import random

import pytest

from conftest import make_program
from peelsim import codec
from peelsim.errors import (
    AsmSyntaxError,
    BadObjectFile,
    DuplicateLabel,
    OperandOutOfRange,
    TruncatedInstruction,
    UndefinedLabel,
    UnknownMnemonic,
    UnknownOpcode,
)
from peelsim.isa import TokKind
from peelsim.machine import MachineConfig


@pytest.fixture
def config():
    return MachineConfig()


# ----------------------------------------------------------------- parsing

def test_parse_simple_statement():
    program = codec.parse("LDI R0, 3;")
    assert len(program.statements) == 1
    stmt = program.statements[0]
    assert stmt.mnemonic == "LDI"
    assert [t.kind for t in stmt.operands] == [TokKind.REG, TokKind.LIT]
    assert [t.value for t in stmt.operands] == [0, 3]


def test_parse_masks():
    stmt = codec.parse("ADD X07,XD0,0,0,0;").statements[0]
    kinds = [t.kind for t in stmt.operands]
    assert kinds[:2] == [TokKind.MASK, TokKind.MASK]
    assert [t.value for t in stmt.operands] == [0x07, 0xD0, 0, 0, 0]


def test_parse_missing_comma():
    with pytest.raises(AsmSyntaxError) as exc:
        codec.parse("LDI R0 3;")
    assert exc.value.line == 1


def test_parse_missing_terminator():
    with pytest.raises(AsmSyntaxError):
        codec.parse("LDI R0, 3")


def test_parse_comments_and_lines():
    src = "LDI R0, 1; // set up\n// whole line comment\nLDI R1, 2;"
    program = codec.parse(src)
    assert [s.line for s in program.statements] == [1, 3]


def test_parse_duplicate_label():
    with pytest.raises(DuplicateLabel):
        codec.parse("a: NOP; a: HLT;")


def test_parse_char_and_color_literals():
    program = codec.parse("CHF 0,0,'H',1,RED,0;")
    values = [t.value for t in program.statements[0].operands]
    assert values[2] == ord("H")
    assert values[4] == 0xFF0000FF


def test_parse_char_escapes():
    stmt = codec.parse("OUT '\\n';").statements[0]
    assert stmt.operands[0].value == 10


def test_parse_register_out_of_encoding_range():
    with pytest.raises(OperandOutOfRange):
        codec.parse("LDI R256, 1;")


def test_parse_collect_diagnostics():
    program = codec.parse("LDI R0 3; HLT;", collect=True)
    assert len(program.diagnostics) == 1
    assert len(program.statements) == 1


# ---------------------------------------------------------------- assembling

def test_assemble_hlt(config):
    image = codec.assemble(codec.parse("HLT;"), config)
    assert image.data == bytes([0xF1])


def test_assemble_ior_two_regs(config):
    image = codec.assemble(codec.parse("IOR R1, R2;"), config)
    assert image.data == bytes([0x30, 0x10, 0x01, 0x02])


def test_assemble_ldi(config):
    image = codec.assemble(codec.parse("LDI R0, 3;"), config)
    # class 0000 opcode 0000, form 1, kinds reg+lit, 4-byte immediate
    assert image.data == bytes([0x00, 0x14, 0x00, 0x00, 0x00, 0x00, 0x03])


def test_assemble_vector_add(config):
    image = codec.assemble(codec.parse("ADD X07,XD0,0,0,0;"), config)
    assert image.data == bytes([0x28, 0x43, 0x80, 0x07, 0xD0, 0, 0, 0])


def test_forward_branch_resolves_to_hlt_offset(config):
    image = codec.assemble(codec.parse("JMP end; NOP; end: HLT;"), config)
    # JMP is 1 + 1 + 2 address bytes, NOP 1 byte -> HLT at offset 5
    assert image.symbol_table["end"] == 5
    assert image.data[2:4] == (5).to_bytes(2, "big")


def test_undefined_label(config):
    with pytest.raises(UndefinedLabel):
        codec.assemble(codec.parse("JMP nowhere;"), config)


def test_unknown_mnemonic(config):
    with pytest.raises(UnknownMnemonic):
        codec.assemble(codec.parse("FOO R1;"), config)


def test_register_beyond_spad(config):
    with pytest.raises(OperandOutOfRange):
        codec.assemble(codec.parse("LDI R20, 1;"), config)


def test_truncation_law(config):
    # value v at width k encodes as v mod 2^(8k); warning iff v >= 2^(8k)
    image = codec.assemble(codec.parse("LDI R0, 4294967296;"), config)
    assert image.data[-4:] == b"\x00\x00\x00\x00"
    assert len(image.warnings) == 1
    ok = codec.assemble(codec.parse("LDI R0, 4294967295;"), config)
    assert not ok.warnings
    negative = codec.assemble(codec.parse("LDI R0, -5;"), config)
    assert negative.data[-4:] == (2**32 - 5).to_bytes(4, "big")


def test_length_law(config):
    program = make_program(random.Random(7), config)
    image = codec.assemble(codec.parse(program), config)
    total = 0
    for span in image.instr_map:
        assert span.offset == total
        total += span.length
    assert total == len(image.data)


def test_instruction_spans_tile_exactly(config):
    image = codec.assemble(
        codec.parse("LDI R0,1; STI 10, 0x0011223344; HLT;"), config)
    spans = [(s.offset, s.length) for s in image.instr_map]
    assert spans[0] == (0, 7)
    assert spans[1][1] == 1 + 1 + 2 + 2 + 5  # head, ext, addr, len, payload
    assert spans[2] == (spans[1][0] + spans[1][1], 1)


# -------------------------------------------------------------- disassembly

def test_disassemble_hlt(config):
    assert codec.disassemble(bytes([0xF1]), config) == "HLT;\n"


def test_disassemble_unknown_opcode(config):
    with pytest.raises(UnknownOpcode) as exc:
        codec.disassemble(bytes([0xFF]), config)
    assert "offset 0" in str(exc.value)


def test_disassemble_truncated(config):
    good = codec.assemble(codec.parse("LDI R0, 3;"), config).data
    with pytest.raises(TruncatedInstruction):
        codec.disassemble(good[:-1], config)


def test_disassemble_branch_labels(config):
    image = codec.assemble(codec.parse("start: NOP; JMP start;"), config)
    text = codec.disassemble(image, config)
    assert text == "L0: NOP;\nJMP L0;\n"


def test_round_trip_hand_program(config):
    src = """
    LDI R0, 3; LDI R1, 7;
    loop: ADD R0, R1;
    CMP R0, 100; BLT loop;
    OUT R0; HLT;
    """
    program = codec.parse(src)
    image = codec.assemble(program, config)
    assert codec.disassemble(image, config) == codec.canonical(program,
                                                               config)


def test_round_trips_randomized(config):
    rng = random.Random(20260809)
    for _ in range(150):
        src = make_program(rng, config)
        program = codec.parse(src)
        image = codec.assemble(program, config)
        text = codec.disassemble(image, config)
        assert text == codec.canonical(program, config)
        again = codec.assemble(codec.parse(text), config)
        assert again.data == image.data


def test_round_trip_other_geometries():
    for width, ram_words in ((8, 256), (16, 4096), (64, 65536)):
        config = MachineConfig(register_width_bits=width,
                               ram_word_bits=width,
                               ram_word_count=ram_words)
        rng = random.Random(width)
        for _ in range(40):
            program = codec.parse(make_program(rng, config))
            image = codec.assemble(program, config)
            text = codec.disassemble(image, config)
            assert text == codec.canonical(program, config)
            assert codec.assemble(codec.parse(text), config).data == image.data


# ---------------------------------------------------------- numeric listings

def test_render_numeric_bases(config):
    image = codec.assemble(codec.parse("HLT;"), config)
    assert codec.render_numeric(image, "hex") == "F1\n"
    assert codec.render_numeric(image, "bin") == "11110001\n"
    assert codec.render_numeric(image, "oct") == "361\n"
    assert codec.render_numeric(image, "dec") == "241\n"


def test_numeric_round_trip(config):
    rng = random.Random(99)
    program = codec.parse(make_program(rng, config))
    image = codec.assemble(program, config)
    for base in ("bin", "oct", "dec", "hex"):
        text = codec.render_numeric(image, base)
        back = codec.read_numeric(text, base, config)
        assert back.data == image.data
        assert [s.offset for s in back.instr_map] == \
            [s.offset for s in image.instr_map]


def test_read_numeric_rejects_bad_width(config):
    with pytest.raises(BadObjectFile):
        codec.read_numeric("F\n", "hex", config)


# -------------------------------------------------------------- object files

def test_capo_round_trip(config):
    program = codec.parse("start: LDI R0, 1; JMP start;")
    image = codec.assemble(program, config)
    blob = codec.write_capo(image, config)
    assert blob[:4] == b"CAPO"
    back, w_bits, a_bytes = codec.read_capo(blob)
    assert (w_bits, a_bytes) == (32, 2)
    assert back.data == image.data
    assert back.symbol_table == image.symbol_table
    assert [s.offset for s in back.instr_map] == \
        [s.offset for s in image.instr_map]


def test_capo_rejects_garbage():
    with pytest.raises(BadObjectFile):
        codec.read_capo(b"NOPE" + bytes(20))
