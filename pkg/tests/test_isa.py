"""Instruction-table invariants and lookup behavior."""

import pytest

from peelsim import isa
from peelsim.errors import NoMatchingForm, UnknownMnemonic, UnknownOpcode
from peelsim.isa import Schema, TokKind


def test_repertoire_size():
    # the class table enumerates 50 mnemonics across 11 classes
    assert len(isa.MNEMONICS) == 50


def test_lookup_mnemonic_case_insensitive():
    assert isa.lookup_mnemonic("ior") is isa.lookup_mnemonic("IOR")


def test_unknown_mnemonic():
    with pytest.raises(UnknownMnemonic):
        isa.lookup_mnemonic("FOO")


def test_ior_codes_fixed():
    spec = isa.lookup_mnemonic("IOR")
    assert spec.class_id == 0b0011
    assert spec.scalar_opcode == 0b0000
    assert spec.vector_opcode == 0b1000
    assert len(spec.forms) == 4


def test_load_class_id_fixed():
    assert isa.lookup_mnemonic("LDI").class_id == 0b0000


def test_hlt_is_bare():
    spec = isa.lookup_mnemonic("HLT")
    assert len(spec.forms) == 1
    assert spec.forms[0].arity == 0


def test_lookup_code_scalar_and_vector():
    assert isa.lookup_code(0b0011, 0b0000).mnemonic == "IOR"
    spec = isa.lookup_code(0b0011, 0b1000)
    assert spec.mnemonic == "IOR"
    assert isa.is_vector_opcode(spec, 0b1000)
    assert not isa.is_vector_opcode(spec, 0b0000)


def test_lookup_code_undefined_class():
    with pytest.raises(UnknownOpcode):
        isa.lookup_code(0b1110, 0b0000)


def test_bijectivity():
    for name in isa.MNEMONICS:
        spec = isa.BY_NAME[name]
        assert isa.lookup_code(spec.class_id, spec.scalar_opcode) is spec
        if spec.vector_opcode is not None:
            assert isa.lookup_code(spec.class_id, spec.vector_opcode) is spec


def test_vector_opcode_law():
    for name in isa.MNEMONICS:
        spec = isa.BY_NAME[name]
        if spec.vector_opcode is not None:
            assert spec.scalar_opcode < 0b1000
            assert spec.vector_opcode == (spec.scalar_opcode | 0b1000)


def test_form_disjointness():
    for name in isa.MNEMONICS:
        spec = isa.BY_NAME[name]
        seen = set()
        for form in spec.forms:
            key = (form.arity,)
            assert key not in seen, f"{name} has ambiguous forms"
            seen.add(key)


def test_vector_forms_need_vector_opcode():
    for name in isa.MNEMONICS:
        spec = isa.BY_NAME[name]
        for form in spec.forms:
            if form.vector:
                assert spec.vector_opcode is not None


def test_extension_width_rule():
    for name in isa.MNEMONICS:
        spec = isa.BY_NAME[name]
        for form in spec.forms:
            if form.arity >= 5:
                assert form.ext_bytes == 2
            else:
                assert form.ext_bytes == 1


def test_select_form_ior_two_regs():
    spec = isa.lookup_mnemonic("IOR")
    form = isa.select_form(spec, [TokKind.REG, TokKind.REG])
    assert form.index == 1
    bits = [isa.kind_bit(s, k) for s, k in zip(form.schemas,
                                               [TokKind.REG, TokKind.REG])]
    assert bits == [0, 0]


def test_select_form_ior_three_operands():
    spec = isa.lookup_mnemonic("IOR")
    kinds = [TokKind.REG, TokKind.LIT, TokKind.LIT]
    form = isa.select_form(spec, kinds)
    assert form.index == 2
    bits = [isa.kind_bit(s, k) for s, k in zip(form.schemas, kinds)]
    assert bits == [0, 1, 1]


def test_select_form_ior_vector():
    spec = isa.lookup_mnemonic("IOR")
    kinds = [TokKind.MASK, TokKind.MASK, TokKind.LIT, TokKind.LIT,
             TokKind.LIT]
    form = isa.select_form(spec, kinds)
    assert form.index == 4
    assert form.vector
    assert form.ext_bytes == 2


def test_select_form_rejects_bad_kinds():
    spec = isa.lookup_mnemonic("IOR")
    with pytest.raises(NoMatchingForm):
        isa.select_form(spec, [TokKind.LIT, TokKind.REG])  # op1 must be reg
    with pytest.raises(NoMatchingForm):
        isa.select_form(spec, [TokKind.REG] * 6)  # no 6-operand form


def test_extension_encoding_layout():
    spec = isa.lookup_mnemonic("IOR")
    form = spec.form_by_index(4, True)
    ext = isa.encode_extension(form, [0, 0, 1, 1, 1])
    assert ext == bytes([0x43, 0x80])
    form1 = spec.form_by_index(1, False)
    assert isa.encode_extension(form1, [0, 0]) == bytes([0x10])


def test_reference_records_cover_all_forms():
    records = list(isa.reference_records())
    assert len(records) == sum(len(isa.BY_NAME[m].forms)
                               for m in isa.MNEMONICS)
    by_mnemonic = {r["mnemonic"] for r in records}
    assert by_mnemonic == set(isa.MNEMONICS)
    for record in records:
        assert record["synopsis"].startswith(record["mnemonic"])
        int(record["class_id"], 2)
        int(record["opcode"], 2)


def test_spec_example_mnemonics_resolve():
    used = ["LDI", "LDA", "ADD", "SUB", "MUL", "DIV", "INC", "DEC", "CMP",
            "IOR", "AND", "XOR", "NOT", "MOV", "SWP", "SHV", "SHL", "JMP",
            "BEQ", "BNE", "BLT", "BGE", "JSR", "RTS", "PSH", "POP", "STF",
            "CLF", "CPF", "MVF", "SWF", "RTF", "FLF", "SCF", "LDF", "SVF",
            "CHF", "INP", "OUT", "NOP", "HLT", "STI", "STA", "STR"]
    for name in used:
        isa.lookup_mnemonic(name)
