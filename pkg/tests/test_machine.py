"""Storage fabric: endian store/load, stack discipline, value rendering."""

import random

import pytest

from conftest import make_machine
from peelsim.errors import (
    AddressOutOfRange,
    EndianUnspecified,
    InvalidConfig,
    StackOverflow,
    StackUnderflow,
)
from peelsim.machine import MachineConfig, render_value


# ------------------------------------------------------------------- config

def test_config_defaults():
    config = MachineConfig()
    assert config.register_width_bits == 32
    assert config.layer_count == 8
    assert config.address_width_bytes == 2


def test_config_validation():
    with pytest.raises(InvalidConfig):
        MachineConfig(register_width_bits=12)
    with pytest.raises(InvalidConfig):
        MachineConfig(spad_count=12)
    with pytest.raises(InvalidConfig):
        MachineConfig(endianness="middle")
    with pytest.raises(InvalidConfig):
        MachineConfig(layer_count=0)


def test_config_from_mapping_rejects_unknown_keys():
    with pytest.raises(InvalidConfig):
        MachineConfig.from_mapping({"register_width_bits": 32, "bogus": 1})


# ------------------------------------------------------------ endian moves

def test_store_wide_register_little():
    m = make_machine(ram_word_bits=8, endianness="little")
    m.spad[0] = 0x11223344
    m.store_register_to_ram(0, 100)
    assert m.ram[100:104] == [0x44, 0x33, 0x22, 0x11]


def test_store_wide_register_big():
    m = make_machine(ram_word_bits=8, endianness="big")
    m.spad[0] = 0x11223344
    m.store_register_to_ram(0, 100)
    assert m.ram[100:104] == [0x11, 0x22, 0x33, 0x44]


def test_little_and_big_write_reversed_sequences():
    rng = random.Random(5)
    for _ in range(50):
        value = rng.randrange(1 << 32)
        little = make_machine(ram_word_bits=8, endianness="little")
        big = make_machine(ram_word_bits=8, endianness="big")
        little.spad[0] = big.spad[0] = value
        little.store_register_to_ram(0, 0)
        big.store_register_to_ram(0, 0)
        assert little.ram[0:4] == big.ram[0:4][::-1]


def test_load_gathers_chunks():
    m = make_machine(ram_word_bits=8, endianness="little")
    m.ram[100:104] = [0x44, 0x33, 0x22, 0x11]
    m.load_register_from_ram(0, 100)
    assert m.spad[0] == 0x11223344


def test_narrow_register_zero_extends():
    m = make_machine(register_width_bits=8, ram_word_bits=32)
    m.spad[0] = 0xAB
    m.store_register_to_ram(0, 5)
    assert m.ram[5] == 0x000000AB


def test_narrow_register_load_truncates_with_warning():
    m = make_machine(register_width_bits=8, ram_word_bits=32)
    m.ram[3] = 0x000001FF
    m.load_register_from_ram(0, 3)
    assert m.spad[0] == 0xFF
    assert len(m.warnings) == 1


def test_endian_none_rejects_register_wider_than_word():
    m = make_machine(register_width_bits=32, ram_word_bits=8,
                     endianness="none")
    with pytest.raises(EndianUnspecified):
        m.store_register_to_ram(0, 0)
    with pytest.raises(EndianUnspecified):
        m.load_register_from_ram(0, 0)


def test_endian_none_allows_equal_and_narrower():
    same = make_machine(register_width_bits=32, ram_word_bits=32,
                        endianness="none")
    same.spad[0] = 0xDEADBEEF
    same.store_register_to_ram(0, 9)
    assert same.ram[9] == 0xDEADBEEF
    # zero-extension into a wider word never needs a byte ordering
    narrow = make_machine(register_width_bits=8, ram_word_bits=32,
                          endianness="none")
    narrow.spad[0] = 0xAB
    narrow.store_register_to_ram(0, 5)
    assert narrow.ram[5] == 0x000000AB
    narrow.load_register_from_ram(1, 5)
    assert narrow.spad[1] == 0xAB


def test_endian_round_trip_property():
    rng = random.Random(11)
    for w, m_bits in ((32, 8), (32, 16), (64, 32), (16, 16), (32, 32)):
        for endian in ("little", "big"):
            machine = make_machine(register_width_bits=w, ram_word_bits=m_bits,
                                   endianness=endian)
            for _ in range(40):
                value = rng.randrange(1 << w)
                machine.spad[1] = value
                machine.store_register_to_ram(1, 7)
                machine.spad[1] = 0
                machine.load_register_from_ram(1, 7)
                assert machine.spad[1] == value


def test_store_out_of_range():
    m = make_machine(ram_word_bits=8)
    with pytest.raises(AddressOutOfRange):
        m.store_register_to_ram(0, m.config.ram_word_count - 1)


# ------------------------------------------------------------------- stack

def test_stack_lifo_descending():
    m = make_machine()
    sp0 = m.sp
    m.stack_push(7)
    assert m.stack_pop() == 7
    assert m.sp == sp0


def test_stack_descending_overflow():
    m = make_machine(stack_depth=4)
    for value in range(4):
        m.stack_push(value)
    assert m.sp == 0
    with pytest.raises(StackOverflow):
        m.stack_push(99)


def test_stack_ascending_layout():
    m = make_machine(stack_direction="ascending", stack_depth=8)
    m.stack_push(ord("a"))
    m.stack_push(ord("b"))
    assert m.stack[0] == ord("a")
    assert m.stack[1] == ord("b")
    assert m.sp == 2


def test_stack_underflow():
    for direction in ("ascending", "descending"):
        m = make_machine(stack_direction=direction)
        with pytest.raises(StackUnderflow):
            m.stack_pop()


def test_balanced_sequence_restores_sp():
    rng = random.Random(3)
    for direction in ("ascending", "descending"):
        m = make_machine(stack_direction=direction, stack_depth=64)
        sp0 = m.sp
        depth = 0
        history = []
        for _ in range(300):
            if depth and rng.random() < 0.5:
                assert m.stack_pop() == history.pop()
                depth -= 1
            elif depth < 60:
                value = rng.randrange(1 << 32)
                m.stack_push(value)
                history.append(value)
                depth += 1
        while history:
            assert m.stack_pop() == history.pop()
        assert m.sp == sp0


def test_stack_width_discipline():
    m = make_machine(stack_word_bits=8)
    m.stack_push(0x1FF)
    assert m.stack_pop() == 0xFF


# ---------------------------------------------------------------- rendering

def test_render_signed_decimal():
    assert render_value(0xFF, 8, "sdec") == "-1"
    assert render_value(0x7F, 8, "sdec") == "127"
    assert render_value(0x80, 8, "sdec") == "-128"


def test_render_bcd():
    assert render_value(0x41, 8, "bcd") == "41"
    assert render_value(0x4A, 8, "bcd") == "4?"


def test_render_float754():
    assert render_value(0x3F800000, 32, "float754") == "1.0"
    assert render_value(0x3FF0000000000000, 64, "float754") == "1.0"


def test_render_fixed_widths():
    assert render_value(0xF1, 8, "bin") == "11110001"
    assert render_value(0xF1, 8, "oct") == "361"
    assert render_value(0xF1, 8, "hex") == "F1"
    assert render_value(0xF1, 8, "udec") == "241"
    assert render_value(5, 16, "hex") == "0005"
    assert render_value(5, 16, "bin") == "0000000000000101"


def test_render_width_reduces_value():
    assert render_value(0x1FF, 8, "udec") == "255"


# ---------------------------------------------------------------- snapshots

def test_dirty_ranges_merge():
    m = make_machine()
    for address in (3, 4, 5, 9, 11, 12):
        m.ram_write(address, 1)
    assert m.drain_dirty_ranges() == [[3, 5], [9, 9], [11, 12]]
    assert m.drain_dirty_ranges() == []


def test_export_state_document():
    m = make_machine()
    m.spad[2] = 7
    m.stack_push(11)
    m.ram_write(40, 5)
    m.output_log.append("hi\n")
    doc = m.export_state()
    assert doc["config"]["register_width_bits"] == 32
    assert doc["spad"][2] == 7
    assert doc["control"]["sp"] == m.sp
    assert doc["ram_dirty_words"] == [40]
    assert doc["stack"] == [11]
    assert len(doc["vram_crc"]) == 8
    assert doc["output_log"] == "hi\n"
    import json as _json
    _json.dumps(doc)  # must be directly serializable


def test_layer_crcs_change_on_write():
    m = make_machine()
    before = m.layer_crcs()
    m.vram[2][0] = 0xFF
    after = m.layer_crcs()
    assert before[2] != after[2]
    assert before[:2] == after[:2]
