#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Exercises the four hot paths (scalar ALU, register prefix scan, bit
prefix, rectangle fill, layer compositing) plus one end-to-end program
run per backend, and prints a speedup table.
"""

import argparse
import importlib
import os
import random
import sys
import time


def _load_backends():
    from peelsim.kernels import pure
    backends = {"pure": pure}
    try:
        from peelsim.kernels import _speed
        backends["c"] = _speed
    except ImportError:
        print("compiled backend not built; benchmarking pure only",
              file=sys.stderr)
    return backends


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_cases():
    rng = random.Random(1)
    alu_args = [(rng.randrange(8), rng.randrange(1 << 32),
                 rng.randrange(1, 1 << 32), 32) for _ in range(20_000)]
    prefix_args = [([rng.randrange(1 << 32) for _ in range(8)],
                    rng.choice((0, 1, 2, 5, 6)), rng.choice((0, 2, 4)),
                    rng.randrange(2), 32) for _ in range(5_000)]
    bit_args = [(rng.randrange(1 << 32), 32, rng.choice((0, 4, 8)),
                 rng.randrange(2), rng.choice((4, 5, 6)))
                for _ in range(5_000)]

    def alu(impl):
        op = impl.alu_op
        for args in alu_args:
            op(*args)

    def prefix(impl):
        scan = impl.prefix_scan
        for args in prefix_args:
            scan(*args)

    def bits(impl):
        bp = impl.bit_prefix
        for args in bit_args:
            bp(*args)

    def fill(impl):
        buf = bytearray(320 * 240 * 4)
        for k in range(300):
            impl.fill_rect(buf, 320, 240, k % 50, k % 40, 100, 80,
                           0x11223344 + k)

    def composite(impl):
        layers = [bytearray(320 * 240 * 4) for _ in range(8)]
        for index, layer in enumerate(layers):
            layer[index::97] = b"\xaa" * len(layer[index::97])
        for _ in range(3):
            impl.composite(layers, 320, 240)

    return [("alu_op x20k", alu), ("prefix_scan x5k", prefix),
            ("bit_prefix x5k", bits), ("fill_rect 300x(100x80)", fill),
            ("composite 8x320x240 x3", composite)]


def bench_end_to_end():
    """Whole-simulator run per backend (set via PEEL_KERNELS + re-exec)."""
    from peelsim import codec, osys
    from peelsim.machine import MachineConfig, MachineState

    config = MachineConfig()
    body = "INC 1,XFF,0; ADD XFF,XFF,2,0,0; IOR R0, R1, 0, 0; " \
           "STF 5,5,40,RED; " * 40 + "HLT;"
    image = codec.assemble(codec.parse(body), config)

    def run():
        machine = MachineState(config)
        the_os = osys.OperatingSystem(machine)
        proc = the_os.spawn(the_os.load(image))
        the_os.admit(proc)
        the_os.run()
        assert proc.exit_clean

    return run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = _load_backends()
    cases = make_cases()
    results = {}
    for name, impl in backends.items():
        for label, fn in cases:
            results[(label, name)] = bench(lambda: fn(impl), args.repeat)

    from peelsim import kernels
    results[("end-to-end run", kernels.BACKEND)] = bench(
        bench_end_to_end(), args.repeat)

    width = max(len(label) for label, _ in cases) + 2
    header = f"{'kernel':<{width}} {'pure (s)':>10} {'c (s)':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, _ in cases:
        pure_t = results.get((label, "pure"))
        c_t = results.get((label, "c"))
        speedup = f"{pure_t / c_t:7.1f}x" if c_t else "      --"
        c_text = f"{c_t:10.4f}" if c_t else "        --"
        print(f"{label:<{width}} {pure_t:10.4f} {c_text} {speedup}")
    label = "end-to-end run"
    t = results[(label, kernels.BACKEND)]
    print(f"{label:<{width}} ({kernels.BACKEND} backend) {t:.4f}s")
    print("\nactive backend:", kernels.BACKEND,
          "(set PEEL_KERNELS=pure|c to override)")


if __name__ == "__main__":
    main()
