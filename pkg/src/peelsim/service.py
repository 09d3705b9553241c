"""Stepping debug session: the protocol surface the CLI and UI consume.

Requests and responses are JSON objects; every machine-mutating command
additionally emits a sequence-numbered snapshot event. The same handler
backs the stdio carrier and the websocket endpoint.
"""

import base64
import json
import time

from . import codec, osys, screen
from .errors import PeelError, ProtocolError
from .machine import BASES, MachineConfig, MachineState

_STACK_SLICE_LIMIT = 128
_MAX_RUN_STEPS = 10_000_000


class Session:
    """One machine, one command queue, serialized handling."""

    def __init__(self, config: MachineConfig = None):
        self.config = config or MachineConfig()
        self.machine = MachineState(self.config)
        self.os = osys.OperatingSystem(self.machine)
        self.program = None
        self.image = None
        self.last_entry = None
        self.breakpoints = {}     # pid -> set of image byte offsets
        self.pacing = False
        self.seq = 0
        self._last_regs = {}
        self._output_pos = 0
        self._resume_token = None

    # ------------------------------------------------------------- protocol

    def handle(self, command) -> tuple:
        """Returns (response dict, [event dicts])."""
        if not isinstance(command, dict) or "cmd" not in command:
            return self._error(ProtocolError("request must be an object "
                                             "with a 'cmd' field")), []
        name = command["cmd"]
        handler = getattr(self, f"_cmd_{name}", None)
        if handler is None:
            return self._error(ProtocolError(f"unknown command {name!r}")), []
        events = []
        try:
            result = handler(command, events)
        except PeelError as err:
            response = self._error(err)
        else:
            response = {"ok": True, "cmd": name, "result": result}
        if "id" in command:
            response["id"] = command["id"]
            for event in events:
                event.setdefault("id", command["id"])
        return response, events

    def _error(self, err) -> dict:
        detail = {"type": type(err).__name__, "message": str(err)}
        if getattr(err, "line", None) is not None:
            detail["line"] = err.line
        if getattr(err, "pc", None) is not None:
            detail["pc"] = err.pc
        return {"ok": False, "error": detail}

    @staticmethod
    def _arg(command, key, kind=None):
        if key not in command:
            raise ProtocolError(f"missing argument {key!r}")
        value = command[key]
        if kind is not None and not isinstance(value, kind):
            raise ProtocolError(f"argument {key!r} must be {kind.__name__}")
        return value

    # ------------------------------------------------------------- commands

    def _cmd_load_source(self, command, events):
        source = self._arg(command, "source", str)
        self.program = codec.parse(source, collect=True)
        return {"statements": len(self.program.statements),
                "diagnostics": self.program.diagnostics}

    def _cmd_assemble(self, command, events):
        if self.program is None:
            raise ProtocolError("no source loaded")
        if self.program.diagnostics:
            raise ProtocolError("source has diagnostics; fix them first")
        self.image = codec.assemble(self.program, self.config)
        return {"bytes": len(self.image.data),
                "symbols": dict(self.image.symbol_table),
                "warnings": [f"line {ln}: {msg}"
                             for ln, msg in self.image.warnings]}

    def _cmd_load_image(self, command, events):
        if self.image is None:
            raise ProtocolError("assemble a program first")
        mode = command.get("mode", osys.WORD_ALIGNED)
        if mode not in (osys.WORD_ALIGNED, osys.PACKED):
            raise ProtocolError("mode must be 'aligned' or 'packed'")
        base = command.get("base", 0)
        entry = self.os.load(self.image, osys.LoadOptions(mode, base))
        self.last_entry = entry
        events.append(self._snapshot_event())
        return {"program_id": entry.program_id, "base_word": entry.base_word,
                "end_word": entry.end_word, "entry_addr": entry.entry_addr}

    def _cmd_spawn(self, command, events):
        if self.last_entry is None:
            raise ProtocolError("load an image first")
        proc = self.os.spawn(self.last_entry)
        self.os.admit(proc)
        events.append(self._snapshot_event())
        return {"pid": proc.pid, "state": proc.state}

    def _cmd_step(self, command, events):
        pid = self._arg(command, "pid", int)
        result = self.os.user_step(pid)
        self._resume_token = None
        events.append(self._snapshot_event())
        return self._tick_summary(result)

    def _cmd_execute(self, command, events):
        pid = command.get("pid")
        outcome = self.run(pid)
        events.append(self._snapshot_event())
        return outcome

    def _cmd_suspend(self, command, events):
        pid = self._arg(command, "pid", int)
        self.os.suspend(pid)
        events.append(self._snapshot_event())
        return {"pid": pid, "state": self.os.get(pid).state}

    def _cmd_resume(self, command, events):
        pid = self._arg(command, "pid", int)
        self.os.resume(pid)
        events.append(self._snapshot_event())
        return {"pid": pid, "state": self.os.get(pid).state}

    def _cmd_set_breakpoint(self, command, events):
        pid, offset = self._breakpoint_site(command)
        self.breakpoints.setdefault(pid, set()).add(offset)
        return {"pid": pid, "offset": offset}

    def _cmd_clear_breakpoint(self, command, events):
        if command.get("all"):
            self.breakpoints.clear()
            return {"cleared": "all"}
        pid, offset = self._breakpoint_site(command)
        self.breakpoints.get(pid, set()).discard(offset)
        return {"pid": pid, "offset": offset}

    def _breakpoint_site(self, command):
        pid = self._arg(command, "pid", int)
        proc = self.os.get(pid)
        if "offset" in command:
            offset = self._arg(command, "offset", int)
        elif "line" in command:
            line = self._arg(command, "line", int)
            offset = proc.entry.offset_for_line(line)
            if offset is None:
                raise ProtocolError(f"no instruction at line {line}")
        else:
            raise ProtocolError("need 'offset' or 'line'")
        return pid, offset

    def _cmd_set_clock(self, command, events):
        hz = self._arg(command, "hz", int)
        if hz < 0:
            raise ProtocolError("hz must be >= 0")
        if hz == 0:
            self.pacing = False
        else:
            self.config.clock_hz = hz
            self.pacing = True
        return {"clock_hz": self.config.clock_hz, "pacing": self.pacing}

    def _cmd_set_cpi(self, command, events):
        mnemonic = self._arg(command, "mnemonic", str).upper()
        cycles = self._arg(command, "cycles", int)
        from . import isa
        isa.lookup_mnemonic(mnemonic)
        if cycles < 1:
            raise ProtocolError("cycles must be >= 1")
        self.config.cpi_table[mnemonic] = cycles
        return {"mnemonic": mnemonic, "cycles": cycles}

    def _cmd_set_base(self, command, events):
        base = self._arg(command, "base", str)
        if base == "dec":
            base = "udec"
        if base not in BASES:
            raise ProtocolError(f"base must be one of {', '.join(BASES)}")
        self.machine.output_base = base
        return {"base": base}

    def _cmd_get_snapshot(self, command, events):
        event = self._snapshot_event()
        events.append(event)
        return {"seq": event["seq"]}

    def _cmd_get_config(self, command, events):
        cfg = self.config
        return {
            "register_width_bits": cfg.register_width_bits,
            "spad_count": cfg.spad_count,
            "ram_word_bits": cfg.ram_word_bits,
            "ram_word_count": cfg.ram_word_count,
            "stack_word_bits": cfg.stack_word_bits,
            "stack_depth": cfg.stack_depth,
            "stack_direction": cfg.stack_direction,
            "endianness": cfg.endianness,
            "screen_width_px": cfg.screen_width_px,
            "screen_height_px": cfg.screen_height_px,
            "layer_count": cfg.layer_count,
            "pixel_size": cfg.pixel_size,
            "clock_hz": cfg.clock_hz,
            "quantum_instructions": cfg.quantum_instructions,
        }

    def _cmd_get_screen(self, command, events):
        rgba = screen.composite(self.machine)
        cfg = self.config
        p6 = screen.to_p6(rgba, cfg.screen_width_px, cfg.screen_height_px)
        return {
            "width": cfg.screen_width_px,
            "height": cfg.screen_height_px,
            "pixel_size": cfg.pixel_size,
            "p6_base64": base64.b64encode(p6).decode("ascii"),
            "layer_crcs": self.machine.layer_crcs(),
        }

    def _cmd_enqueue_input(self, command, events):
        value = self._arg(command, "value", int)
        self.os.enqueue_input(value)
        events.append(self._snapshot_event())
        return {"queued": len(self.machine.input_queue)}

    def _cmd_stats(self, command, events):
        pid = self._arg(command, "pid", int)
        proc = self.os.get(pid)
        return proc.stats.as_dict(self.config.clock_hz)

    def _cmd_core_map(self, command, events):
        return {"table": self.os.core_map_table()}

    def _cmd_isa_reference(self, command, events):
        from . import isa
        return {"records": list(isa.reference_records())}

    def _cmd_reset(self, command, events):
        self.machine = MachineState(self.config)
        self.os = osys.OperatingSystem(self.machine)
        self.last_entry = None
        self.breakpoints.clear()
        self.seq = 0
        self._last_regs.clear()
        self._output_pos = 0
        self._resume_token = None
        events.append(self._snapshot_event())
        return {"reset": True}

    # ------------------------------------------------------------ execution

    def _peek(self):
        """(pid, image offset) of the instruction the next tick would run."""
        if self.os.running is not None:
            proc = self.os.processes[self.os.running]
            return proc.pid, proc.entry.addr_to_offset.get(self.machine.pc)
        if self.os.ready:
            proc = self.os.processes[self.os.ready[0]]
            return proc.pid, proc.entry.addr_to_offset.get(proc.context.pc)
        return None

    def run(self, pid=None, on_step=None) -> dict:
        """Free-run under the scheduler until halt, block or breakpoint."""
        if pid is not None:
            proc = self.os.get(pid)
            if proc.state == osys.NEW:
                self.os.admit(proc)
        start = time.perf_counter()
        paced_cycles = 0
        steps = 0
        while steps < _MAX_RUN_STEPS:
            if not self.os.alive():
                return {"stopped": "finished", "steps": steps,
                        "faults": self._fault_summary()}
            if not self.os.runnable():
                return {"stopped": "blocked", "steps": steps}
            peek = self._peek()
            if peek is not None:
                bp_pid, offset = peek
                if offset is not None \
                        and offset in self.breakpoints.get(bp_pid, ()) \
                        and self._resume_token != (bp_pid, offset):
                    self._resume_token = (bp_pid, offset)
                    # the stopped process is held ready, first in line
                    self.os.preempt_to_front()
                    return {"stopped": "breakpoint", "pid": bp_pid,
                            "offset": offset, "steps": steps}
            result = self.os.tick()
            if result.idle:
                return {"stopped": "blocked", "steps": steps}
            self._resume_token = None
            steps += 1
            if on_step is not None:
                on_step(result)
            if self.pacing and result.step is not None:
                paced_cycles += result.step.cycles
                target = start + paced_cycles / self.config.clock_hz
                delay = target - time.perf_counter()
                if delay > 0:
                    time.sleep(delay)
        return {"stopped": "step_limit", "steps": steps}

    def _fault_summary(self):
        return {str(p.pid): p.diagnostic
                for p in self.os.processes.values()
                if p.diagnostic is not None}

    def _tick_summary(self, result: osys.TickResult) -> dict:
        out = {"pid": result.pid}
        if result.fault is not None:
            out["fault"] = str(result.fault)
        if result.pid is not None:
            out["state"] = self.os.get(result.pid).state
        if result.step is not None:
            out["executed"] = result.step.decoded.mnemonic
            out["offset"] = result.step.image_offset
        return out

    # ------------------------------------------------------------ snapshots

    def _proc_view(self, proc):
        if proc.state == osys.RUNNING:
            m = self.machine
            spad, stack, sp = list(m.spad), m.stack, m.sp
            pc, flags = m.pc, m.flags
        else:
            ctx = proc.context
            spad, stack, sp = list(ctx.spad), ctx.stack, ctx.sp
            pc, flags = ctx.pc, ctx.flags
        if self.config.stack_direction == "descending":
            live = stack[sp:][::-1]
        else:
            live = stack[:sp]
        if len(live) > _STACK_SLICE_LIMIT:
            live = live[-_STACK_SLICE_LIMIT:]
        return spad, live, sp, pc, flags

    def _snapshot_event(self) -> dict:
        self.seq += 1
        processes = {}
        for pid, proc in sorted(self.os.processes.items()):
            spad, stack_live, sp, pc, flags = self._proc_view(proc)
            previous = self._last_regs.get(pid)
            changed = [i for i, v in enumerate(spad)
                       if previous is None or previous[i] != v]
            self._last_regs[pid] = spad
            offset = proc.entry.addr_to_offset.get(pc)
            processes[str(pid)] = {
                "state": proc.state,
                "spad": spad,
                "pc": pc,
                "offset": offset,
                "line": proc.entry.line_for(offset) if offset is not None
                        else None,
                "sp": sp,
                "sr": flags.as_dict(),
                "stack": stack_live,
                "stats": proc.stats.as_dict(self.config.clock_hz),
                "changed_regs": changed,
                "diagnostic": proc.diagnostic,
            }
        output = "".join(self.machine.output_log)
        delta = output[self._output_pos:]
        self._output_pos = len(output)
        data = {
            "processes": processes,
            "ram_dirty": self.machine.drain_dirty_ranges(),
            "vram_crc": self.machine.layer_crcs(),
            "output_delta": delta,
            "input_pending": len(self.machine.input_queue),
            "breakpoints": {str(pid): sorted(offs)
                            for pid, offs in self.breakpoints.items() if offs},
            "core_map": self.os.core_map_table(),
        }
        return {"event": "snapshot", "seq": self.seq, "data": data}


def handle_line(session: Session, line: str):
    """One stdio-carrier request: parse JSON, handle, serialize."""
    try:
        command = json.loads(line)
    except json.JSONDecodeError as err:
        response = session._error(ProtocolError(f"bad JSON: {err}"))
        return json.dumps(response, sort_keys=True), []
    response, events = session.handle(command)
    return (json.dumps(response, sort_keys=True),
            [json.dumps(e, sort_keys=True) for e in events])


def run_stdio(session: Session, in_stream, out_stream):
    """Serve newline-delimited JSON over file streams until EOF.

    Snapshot events go out before the response so a client that has read
    the response is guaranteed a current view.
    """
    for line in in_stream:
        line = line.strip()
        if not line:
            continue
        response, events = handle_line(session, line)
        for event in events:
            out_stream.write(event + "\n")
        out_stream.write(response + "\n")
        out_stream.flush()
