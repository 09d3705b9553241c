"""Command-line front door: assemble, disassemble, run, serve, compile.

Exit codes: 0 clean halt, 1 execution fault or program error, 2 usage,
3 file errors. Diagnostics go to stderr, artifacts to stdout or -o.
"""

import argparse
import json
import os
import sys

from . import bnfc, codec, isa, osys
from .errors import PeelError
from .machine import load_config
from .service import Session


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peel",
        description="dual-mode RISC instruction-set simulator toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_asm = sub.add_parser("asm", help="assemble source to a CAPO object")
    p_asm.add_argument("input")
    p_asm.add_argument("-o", "--output")

    p_dis = sub.add_parser("disasm", help="disassemble a CAPO object")
    p_dis.add_argument("input")
    p_dis.add_argument("-o", "--output")

    p_run = sub.add_parser("run", help="assemble (if needed), load, execute")
    p_run.add_argument("input")
    p_run.add_argument("--mode", choices=[osys.WORD_ALIGNED, osys.PACKED],
                       default=osys.WORD_ALIGNED)
    p_run.add_argument("--endian", choices=["little", "big", "none"])
    p_run.add_argument("--clock", type=int,
                       help="pace execution at this clock rate (Hz)")
    p_run.add_argument("--quantum", type=int)
    p_run.add_argument("--trace", action="store_true")
    p_run.add_argument("--stats", action="store_true")
    p_run.add_argument("--input", dest="inputs", type=int, action="append",
                       default=[], help="queue an input value (repeatable)")
    p_run.add_argument("--base", type=int, default=0,
                       help="load address (RAM word index)")
    p_run.add_argument("--screen-dump", metavar="FILE",
                       help="write the final composited screen as P6")

    p_serve = sub.add_parser("serve", help="websocket debug service + UI")
    p_serve.add_argument("--port", type=int, default=8750)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--frontend",
                         help="directory with built UI assets")
    p_serve.add_argument("--stdio", action="store_true",
                         help="serve the JSON protocol on stdin/stdout")

    p_bnfc = sub.add_parser("bnfc", help="compile expression programs (.bnf)")
    p_bnfc.add_argument("input")
    p_bnfc.add_argument("-o", "--output")

    p_isa = sub.add_parser("isa", help="emit the ISA reference as JSON lines")
    p_isa.add_argument("-o", "--output")
    return parser


def _config(args):
    overrides = {}
    if getattr(args, "endian", None):
        overrides["endianness"] = args.endian
    if getattr(args, "quantum", None):
        overrides["quantum_instructions"] = args.quantum
    return load_config(os.environ.get("PEEL_CONFIG"), overrides)


def _read(path: str, binary=False):
    try:
        with open(path, "rb" if binary else "r") as fh:
            return fh.read()
    except OSError as err:
        raise FileError(str(err)) from None


def _write(path, data, binary=False):
    if path is None or path == "-":
        if binary:
            sys.stdout.buffer.write(data)
        else:
            sys.stdout.write(data)
        return
    try:
        with open(path, "wb" if binary else "w") as fh:
            fh.write(data)
    except OSError as err:
        raise FileError(str(err)) from None


class FileError(Exception):
    pass


def _cmd_asm(args) -> int:
    config = _config(args)
    image = codec.assemble(codec.parse(_read(args.input)), config)
    for line, message in image.warnings:
        print(f"{args.input}:{line}: warning: {message}", file=sys.stderr)
    output = args.output or os.path.splitext(args.input)[0] + ".capo"
    _write(output, codec.write_capo(image, config), binary=True)
    return 0


def _cmd_disasm(args) -> int:
    blob = _read(args.input, binary=True)
    image, w_bits, a_bytes = codec.read_capo(blob)
    text = codec.disassemble(image, codec.Geometry(w_bits // 8, a_bytes))
    _write(args.output, text)
    return 0


def _load_program(args, session: Session) -> int:
    if args.input.endswith(".capo"):
        blob = _read(args.input, binary=True)
        image, w_bits, a_bytes = codec.read_capo(blob)
        geom = codec.Geometry.coerce(session.config)
        if (w_bits, a_bytes) != (geom.imm_bytes * 8, geom.addr_bytes):
            print(f"peel: object fingerprint ({w_bits}-bit registers, "
                  f"{a_bytes}-byte addresses) does not match the configured "
                  "machine", file=sys.stderr)
            return 1
        session.image = image
        return 0
    source = _read(args.input)
    response, _ = session.handle({"cmd": "load_source", "source": source})
    if not response["ok"] or response["result"]["diagnostics"]:
        for diag in response.get("result", {}).get("diagnostics",
                                                   [response.get("error")]):
            print(f"peel: {diag}", file=sys.stderr)
        return 1
    response, _ = session.handle({"cmd": "assemble"})
    if not response["ok"]:
        print(f"peel: {response['error']['message']}", file=sys.stderr)
        return 1
    for warning in response["result"]["warnings"]:
        print(f"peel: warning: {warning}", file=sys.stderr)
    return 0


def _cmd_run(args) -> int:
    config = _config(args)
    session = Session(config)
    rc = _load_program(args, session)
    if rc:
        return rc
    response, _ = session.handle(
        {"cmd": "load_image", "mode": args.mode, "base": args.base})
    if not response["ok"]:
        print(f"peel: {response['error']['message']}", file=sys.stderr)
        return 1
    response, _ = session.handle({"cmd": "spawn"})
    pid = response["result"]["pid"]
    for value in args.inputs:
        session.handle({"cmd": "enqueue_input", "value": value})
    if args.clock:
        session.handle({"cmd": "set_clock", "hz": args.clock})

    tracer = _Tracer() if args.trace else None
    outcome = session.run(pid, on_step=tracer)
    proc = session.os.get(pid)
    sys.stdout.write("".join(session.machine.output_log))
    if args.screen_dump:
        from . import screen
        rgba = screen.composite(session.machine)
        _write(args.screen_dump,
               screen.to_p6(rgba, config.screen_width_px,
                            config.screen_height_px), binary=True)
    if args.stats:
        stats = proc.stats.as_dict(config.clock_hz)
        print(f"instructions: {stats['instructions']}", file=sys.stderr)
        print(f"cycles:       {stats['cycles']}", file=sys.stderr)
        print(f"ipc:          {stats['ipc']}", file=sys.stderr)
        print(f"model time:   {stats['model_time_s']} s", file=sys.stderr)
    if proc.diagnostic is not None:
        print(f"peel: fault: {proc.diagnostic}", file=sys.stderr)
        return 1
    if outcome["stopped"] == "blocked":
        print("peel: blocked waiting for input", file=sys.stderr)
        return 1
    return 0 if proc.exit_clean else 1


class _Tracer:
    def __init__(self):
        self.cycles = 0

    def __call__(self, result):
        if result.step is None:
            return
        step = result.step
        self.cycles += step.cycles
        text = codec.render_instruction(step.decoded)
        changes = " ".join(f"R{i}={v}" for i, v in step.changed)
        print(f"{self.cycles:>8}  {step.decoded.offset:06X}  {text:<32} "
              f"{changes}".rstrip(), file=sys.stderr)


def _cmd_serve(args) -> int:
    config = _config(args)
    session = Session(config)
    if args.stdio:
        from .service import run_stdio
        run_stdio(session, sys.stdin, sys.stdout)
        return 0
    frontend = args.frontend
    if frontend is None and os.path.isdir("frontend/dist"):
        frontend = "frontend/dist"
    from .server import serve
    serve(port=args.port, host=args.host, session=session,
          frontend_dir=frontend)
    return 0


def _cmd_bnfc(args) -> int:
    config = _config(args)
    compiled = bnfc.compile_source(_read(args.input), config)
    header = "".join(f"// {name} -> RAM[{addr}]\n"
                     for name, addr in sorted(compiled.symbols.items()))
    _write(args.output, header + compiled.assembly)
    return 0


def _cmd_isa(args) -> int:
    lines = "".join(json.dumps(record, sort_keys=True) + "\n"
                    for record in isa.reference_records())
    _write(args.output, lines)
    return 0


_DISPATCH = {
    "asm": _cmd_asm,
    "disasm": _cmd_disasm,
    "run": _cmd_run,
    "serve": _cmd_serve,
    "bnfc": _cmd_bnfc,
    "isa": _cmd_isa,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except FileError as err:
        print(f"peel: {err}", file=sys.stderr)
        return 3
    except PeelError as err:
        print(f"peel: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
