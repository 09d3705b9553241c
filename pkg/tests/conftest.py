"""Shared helpers: machine builders, a random program generator, oracles."""

import random
from types import SimpleNamespace

import pytest

from peelsim import codec, isa, osys
from peelsim.isa import Schema
from peelsim.machine import MachineConfig, MachineState


@pytest.fixture
def config():
    return MachineConfig()


def make_machine(**kw) -> MachineState:
    return MachineState(MachineConfig(**kw))


def run_source(src, config=None, mode=osys.WORD_ALIGNED, base=0, inputs=(),
               max_steps=1_000_000):
    """Assemble, load, spawn and run one program to completion."""
    config = config or MachineConfig()
    image = codec.assemble(codec.parse(src), config)
    machine = MachineState(config)
    the_os = osys.OperatingSystem(machine)
    entry = the_os.load(image, osys.LoadOptions(mode, base))
    proc = the_os.spawn(entry)
    the_os.admit(proc)
    for value in inputs:
        machine.input_queue.append(value)
    the_os.run(max_steps)
    return SimpleNamespace(proc=proc, machine=machine, os=the_os,
                           image=image, entry=entry, config=config)


# ----------------------------------------------------- random valid programs

def _operand_text(rng, schema, labels, spad_count, is_branch):
    if schema is Schema.REG:
        return f"R{rng.randrange(spad_count)}"
    if schema is Schema.MASK:
        return f"X{rng.randrange(256):02X}"
    if schema is Schema.LIT8:
        return str(rng.randrange(256))
    if schema is Schema.LPIMM:
        n = rng.randrange(1, 9)
        return "0x" + "".join(rng.choice("0123456789ABCDEF")
                              for _ in range(2 * n))
    if schema is Schema.RLADDR:
        roll = rng.random()
        if roll < 0.4 and labels and is_branch:
            return rng.choice(labels)
        if roll < 0.6:
            return f"R{rng.randrange(spad_count)}"
        return str(rng.randrange(64))
    # RLIMM
    roll = rng.random()
    if roll < 0.35:
        return f"R{rng.randrange(spad_count)}"
    if roll < 0.45:
        return str(-rng.randrange(1, 1 << 16))
    if roll < 0.55:
        return str(rng.randrange(1 << 40))  # exercises truncation
    return str(rng.randrange(1 << 16))


def make_program(rng: random.Random, config=None, length=None) -> str:
    """Random syntactically-valid source covering the whole repertoire."""
    config = config or MachineConfig()
    length = length or rng.randrange(3, 18)
    label_count = rng.randrange(0, 4)
    label_at = {rng.randrange(length): f"lab{k}"
                for k in range(label_count)}
    labels = list(label_at.values())
    lines = []
    for index in range(length):
        spec = isa.BY_NAME[rng.choice(isa.MNEMONICS)]
        form = rng.choice(spec.forms)
        is_branch = spec.class_id == isa.CLASS_BRANCH
        ops = [_operand_text(rng, schema, labels, config.spad_count,
                             is_branch)
               for schema in form.schemas]
        text = spec.mnemonic + (" " + ",".join(ops) if ops else "") + ";"
        if index in label_at:
            text = f"{label_at[index]}: {text}"
        lines.append(text)
    return "\n".join(lines) + "\n"


# ------------------------------------------------------- independent oracles

def select_oracle(mask: int, window: int):
    """Mask bit 7 selects the lowest register of the 8-register window."""
    return [8 * window + i for i in range(8) if (mask >> (7 - i)) & 1]


PY_OPS = {
    "ADD": lambda a, b: a + b,
    "SUB": lambda a, b: a - b,
    "MUL": lambda a, b: a * b,
    "AND": lambda a, b: a & b,
    "IOR": lambda a, b: a | b,
    "XOR": lambda a, b: a ^ b,
}


def prefix_oracle(spad, mnemonic, dest_mask, src_mask, domain, direction,
                  window, width):
    """Brute-force register prefix: materialize, fold, scatter by rank."""
    mask = (1 << width) - 1
    src = select_oracle(src_mask, window)
    dst = select_oracle(dest_mask, window)
    assert len(src) == len(dst)
    vals = [spad[i] & mask for i in src]
    n = len(vals)
    d = domain if domain else n
    assert d == 0 or n % d == 0
    out = list(spad)
    op = PY_OPS[mnemonic]
    for base in range(0, n, max(d, 1)):
        positions = list(range(base, min(base + d, n)))
        if direction == 1:
            positions.reverse()
        acc = None
        for pos in positions:
            acc = vals[pos] if acc is None else op(acc, vals[pos]) & mask
            out[dst[pos]] = acc
    return out


def bit_prefix_oracle(value, width, split, direction, mnemonic):
    """Bit-level prefix over MSB-first bit positions."""
    d = split if split else width
    assert width % d == 0
    bits = [(value >> (width - 1 - i)) & 1 for i in range(width)]
    out = [0] * width
    op = PY_OPS[mnemonic]
    for base in range(0, width, d):
        positions = list(range(base, base + d))
        if direction == 1:
            positions.reverse()
        acc = None
        for pos in positions:
            acc = bits[pos] if acc is None else op(acc, bits[pos]) & 1
            out[pos] = acc
    return sum(bit << (width - 1 - i) for i, bit in enumerate(out))


def eval_expr_oracle(statements):
    """Tree-walking evaluator over unbounded Python ints."""
    env = {}

    def walk(node):
        kind = node[0]
        if kind == "num":
            return node[1]
        if kind == "var":
            return env[node[1]]
        if kind == "neg":
            return -walk(node[1])
        _, op, left, right = node
        a, b = walk(left), walk(right)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        q = abs(a) // abs(b)
        return -q if (a < 0) != (b < 0) else q

    for name, ast in statements:
        env[name] = walk(ast)
    return env
