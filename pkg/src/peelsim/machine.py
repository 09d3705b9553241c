"""Configurable storage fabric: registers, RAM, VRAM, STACK, rendering."""

import json
import struct
import zlib
from collections import deque
from dataclasses import dataclass, field, fields

from .errors import (
    AddressOutOfRange,
    EndianUnspecified,
    InvalidConfig,
    StackOverflow,
    StackUnderflow,
)

VALID_WIDTHS = (8, 16, 32, 64)

LITTLE = "little"
BIG = "big"
NONE = "none"

ASCENDING = "ascending"
DESCENDING = "descending"


@dataclass
class MachineConfig:
    register_width_bits: int = 32
    spad_count: int = 16
    ram_word_bits: int = 32
    ram_word_count: int = 65536
    stack_word_bits: int = 32
    stack_depth: int = 1024
    stack_direction: str = DESCENDING
    endianness: str = BIG
    screen_width_px: int = 320
    screen_height_px: int = 240
    layer_count: int = 8
    pixel_size: int = 1
    clock_hz: int = 1_000_000
    cpi_table: dict = field(default_factory=dict)
    quantum_instructions: int = 16

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.register_width_bits not in VALID_WIDTHS:
            raise InvalidConfig(f"register width {self.register_width_bits}")
        if self.ram_word_bits not in VALID_WIDTHS:
            raise InvalidConfig(f"RAM word width {self.ram_word_bits}")
        if self.stack_word_bits not in VALID_WIDTHS:
            raise InvalidConfig(f"stack word width {self.stack_word_bits}")
        if not (8 <= self.spad_count <= 256) or self.spad_count % 8:
            raise InvalidConfig(f"spad_count {self.spad_count}")
        if self.ram_word_count <= 0 or self.stack_depth <= 0:
            raise InvalidConfig("memory sizes must be positive")
        if self.stack_direction not in (ASCENDING, DESCENDING):
            raise InvalidConfig(f"stack direction {self.stack_direction!r}")
        if self.endianness not in (LITTLE, BIG, NONE):
            raise InvalidConfig(f"endianness {self.endianness!r}")
        if self.layer_count < 1:
            raise InvalidConfig("layer_count must be >= 1")
        if self.screen_width_px <= 0 or self.screen_height_px <= 0:
            raise InvalidConfig("screen dimensions must be positive")
        if self.clock_hz <= 0:
            raise InvalidConfig("clock_hz must be positive")
        if self.quantum_instructions <= 0:
            raise InvalidConfig("quantum_instructions must be positive")

    @property
    def address_width_bytes(self) -> int:
        bits = max(1, (self.ram_word_count - 1).bit_length())
        return (bits + 7) // 8

    @property
    def ram_word_bytes(self) -> int:
        return self.ram_word_bits // 8

    def cpi(self, mnemonic: str) -> int:
        return self.cpi_table.get(mnemonic, 1)

    def to_json(self) -> str:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        return json.dumps(out, sort_keys=True)

    @classmethod
    def from_mapping(cls, mapping) -> "MachineConfig":
        known = {f.name for f in fields(cls)}
        bad = set(mapping) - known
        if bad:
            raise InvalidConfig(f"unknown config keys: {sorted(bad)}")
        return cls(**mapping)


def load_config(path=None, overrides=None) -> MachineConfig:
    """Default config, optionally overridden by a flat JSON document."""
    values = {}
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise InvalidConfig("config document must be a JSON object")
        values.update(doc)
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return MachineConfig.from_mapping(values)


class Flags:
    __slots__ = ("z", "n", "c", "v")

    def __init__(self, z=False, n=False, c=False, v=False):
        self.z, self.n, self.c, self.v = z, n, c, v

    def set_from(self, packed: int):
        self.z = bool(packed & 8)
        self.n = bool(packed & 4)
        self.c = bool(packed & 2)
        self.v = bool(packed & 1)

    def as_dict(self):
        return {"z": int(self.z), "n": int(self.n), "c": int(self.c),
                "v": int(self.v)}

    def copy(self):
        return Flags(self.z, self.n, self.c, self.v)


class MachineState:
    """Registers, memories and queues of one simulated machine.

    Every write is range-reduced to its cell width. VRAM layers are raw
    RGBA bytearrays, one per screen layer, row-major.
    """

    def __init__(self, config: MachineConfig):
        self.config = config
        self.spad = [0] * config.spad_count
        self.ram = [0] * config.ram_word_count
        npx = config.screen_width_px * config.screen_height_px
        self.vram = [bytearray(npx * 4) for _ in range(config.layer_count)]
        self.stack = [0] * config.stack_depth
        self.sp = 0 if config.stack_direction == ASCENDING else config.stack_depth
        self.pc = 0
        self.flags = Flags()
        self.input_queue = deque()
        self.output_log = []
        self.warnings = []
        self.dirty_words = set()
        self.output_base = "udec"

    # ------------------------------------------------------------ registers

    def reg_read(self, index: int) -> int:
        return self.spad[index]

    def reg_write(self, index: int, value: int):
        self.spad[index] = value & self.reg_mask

    @property
    def reg_mask(self) -> int:
        return (1 << self.config.register_width_bits) - 1

    # ------------------------------------------------------------------ RAM

    def _check_ram(self, address: int, count: int = 1):
        if address < 0 or address + count > self.config.ram_word_count:
            raise AddressOutOfRange(
                f"RAM words [{address}, {address + count}) out of range")

    def ram_read(self, address: int) -> int:
        self._check_ram(address)
        return self.ram[address]

    def ram_write(self, address: int, value: int):
        self._check_ram(address)
        self.ram[address] = value & ((1 << self.config.ram_word_bits) - 1)
        self.dirty_words.add(address)

    # ---------------------------------------------------- endian store/load

    def store_register_to_ram(self, reg_index: int, address: int):
        """Spill one register into RAM with the configured byte ordering."""
        w = self.config.register_width_bits
        m = self.config.ram_word_bits
        value = self.spad[reg_index]
        if w == m:
            self.ram_write(address, value)
            return
        if w > m:
            # chunk order needs a byte ordering; 'none' cannot provide one
            if self.config.endianness == NONE:
                raise EndianUnspecified(
                    "endianness 'none' cannot split a register across "
                    "narrower RAM words")
            k = w // m
            self._check_ram(address, k)
            chunks = [(value >> (m * i)) & ((1 << m) - 1) for i in range(k)]
            if self.config.endianness == BIG:
                chunks.reverse()
            for i, chunk in enumerate(chunks):
                self.ram_write(address + i, chunk)
        else:
            # narrow register into a wide word: zero-extend, one word,
            # endianness (even 'none') irrelevant
            self.ram_write(address, value)

    def load_register_from_ram(self, reg_index: int, address: int):
        """Exact inverse of store_register_to_ram."""
        w = self.config.register_width_bits
        m = self.config.ram_word_bits
        if w == m:
            self.reg_write(reg_index, self.ram_read(address))
            return
        if w > m:
            if self.config.endianness == NONE:
                raise EndianUnspecified(
                    "endianness 'none' cannot gather a register from "
                    "narrower RAM words")
            k = w // m
            self._check_ram(address, k)
            words = [self.ram_read(address + i) for i in range(k)]
            if self.config.endianness == BIG:
                words.reverse()
            value = 0
            for i, word in enumerate(words):
                value |= word << (m * i)
            self.reg_write(reg_index, value)
        else:
            word = self.ram_read(address)
            if word >> w:
                self.warnings.append(
                    f"load truncated RAM[{address}]=0x{word:X} to "
                    f"{w} bits")
            self.reg_write(reg_index, word)

    # ---------------------------------------------------------------- stack

    def stack_push(self, value: int):
        if self.config.stack_direction == DESCENDING:
            if self.sp == 0:
                raise StackOverflow("stack full")
            self.sp -= 1
            self.stack[self.sp] = value & ((1 << self.config.stack_word_bits) - 1)
        else:
            if self.sp == self.config.stack_depth:
                raise StackOverflow("stack full")
            self.stack[self.sp] = value & ((1 << self.config.stack_word_bits) - 1)
            self.sp += 1

    def stack_pop(self) -> int:
        if self.config.stack_direction == DESCENDING:
            if self.sp == self.config.stack_depth:
                raise StackUnderflow("stack empty")
            value = self.stack[self.sp]
            self.sp += 1
        else:
            if self.sp == 0:
                raise StackUnderflow("stack empty")
            self.sp -= 1
            value = self.stack[self.sp]
        return value

    def stack_live_slice(self, limit=None):
        """Cells currently in use, oldest first."""
        if self.config.stack_direction == DESCENDING:
            live = self.stack[self.sp:][::-1]
        else:
            live = self.stack[:self.sp]
        if limit is not None and len(live) > limit:
            live = live[-limit:]
        return live

    # ------------------------------------------------------------ code space

    def code_byte_write(self, byte_address: int, value: int):
        self._write_byte_in_word(byte_address, value)

    def code_byte_read(self, byte_address: int) -> int:
        bpw = self.config.ram_word_bytes
        word_index, k = divmod(byte_address, bpw)
        word = self.ram_read(word_index)
        shift = self._byte_shift(k)
        return (word >> shift) & 0xFF

    def _byte_shift(self, k: int) -> int:
        bpw = self.config.ram_word_bytes
        if bpw == 1:
            return 0
        if self.config.endianness == BIG:
            return (bpw - 1 - k) * 8
        if self.config.endianness == LITTLE:
            return k * 8
        raise EndianUnspecified(
            "endianness 'none' cannot place bytes inside multi-byte words")

    def _write_byte_in_word(self, byte_address: int, value: int):
        bpw = self.config.ram_word_bytes
        word_index, k = divmod(byte_address, bpw)
        shift = self._byte_shift(k)
        word = self.ram_read(word_index)
        word = (word & ~(0xFF << shift)) | ((value & 0xFF) << shift)
        self.ram_write(word_index, word)

    def write_bytes(self, byte_address: int, data: bytes):
        for i, b in enumerate(data):
            self._write_byte_in_word(byte_address + i, b)

    # ------------------------------------------------------------ snapshots

    def layer_crcs(self):
        return [zlib.crc32(bytes(layer)) & 0xFFFFFFFF for layer in self.vram]

    def export_state(self, stack_slice_limit=128) -> dict:
        """One structured document describing the whole machine.

        Does not drain the dirty set; callers that want deltas use
        drain_dirty_ranges afterwards.
        """
        dirty = sorted(self.dirty_words)
        return {
            "config": json.loads(self.config.to_json()),
            "spad": list(self.spad),
            "control": {"pc": self.pc, "sp": self.sp,
                        "sr": self.flags.as_dict()},
            "ram_dirty_words": dirty,
            "stack": self.stack_live_slice(stack_slice_limit),
            "vram_crc": self.layer_crcs(),
            "output_log": "".join(self.output_log),
        }

    def drain_dirty_ranges(self):
        """Merge and clear the set of RAM words written since last call."""
        if not self.dirty_words:
            return []
        ranges = []
        start = prev = None
        for word in sorted(self.dirty_words):
            if start is None:
                start = prev = word
            elif word == prev + 1:
                prev = word
            else:
                ranges.append([start, prev])
                start = prev = word
        ranges.append([start, prev])
        self.dirty_words.clear()
        return ranges


BASES = ("bin", "oct", "udec", "sdec", "bcd", "hex", "float754")


def render_value(value: int, width_bits: int, base: str) -> str:
    """Fixed-width text rendering of one cell in the requested base."""
    if width_bits not in VALID_WIDTHS:
        raise InvalidConfig(f"width {width_bits}")
    value &= (1 << width_bits) - 1
    if base == "bin":
        return format(value, f"0{width_bits}b")
    if base == "oct":
        return format(value, f"0{(width_bits + 2) // 3}o")
    if base == "hex":
        return format(value, f"0{width_bits // 4}X")
    if base == "udec" or base == "dec":
        return str(value)
    if base == "sdec":
        if value >> (width_bits - 1):
            value -= 1 << width_bits
        return str(value)
    if base == "bcd":
        digits = []
        for i in range(width_bits // 4 - 1, -1, -1):
            nibble = (value >> (4 * i)) & 0xF
            digits.append(str(nibble) if nibble <= 9 else "?")
        return "".join(digits)
    if base == "float754":
        if width_bits == 32:
            return repr(struct.unpack(">f", value.to_bytes(4, "big"))[0])
        if width_bits == 64:
            return repr(struct.unpack(">d", value.to_bytes(8, "big"))[0])
        raise InvalidConfig("float754 rendering needs a 32 or 64 bit cell")
    raise InvalidConfig(f"unknown base {base!r}")
