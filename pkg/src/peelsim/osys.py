"""Loader, core map, process lifecycle and the round-robin scheduler.

RAM and VRAM are shared across processes; each process owns its SPAD,
STACK and control registers, swapped in and out at context switches.
Instructions are atomic: switches happen only between steps.
"""

from collections import deque
from dataclasses import dataclass, field

from . import engine
from .errors import (
    Fault,
    IllegalTransition,
    ImageTooLarge,
    OverlapsExistingEntry,
    UnknownPid,
)

WORD_ALIGNED = "aligned"
PACKED = "packed"

NEW = "new"
READY = "ready"
WAITING = "waiting"
RUNNING = "running"
DEAD = "dead"


@dataclass
class LoadOptions:
    mode: str = WORD_ALIGNED
    base_address: int = 0


@dataclass
class LoadedProgram:
    """Core-map entry: where one image sits in RAM and how to step it."""

    program_id: int
    image: object
    mode: str
    base_word: int
    end_word: int            # exclusive
    entry_addr: int          # RAM byte address of the entry instruction
    offset_to_addr: dict     # image byte offset -> RAM byte address
    addr_to_offset: dict
    start_byte: int
    end_byte: int            # exclusive
    lines: dict              # image byte offset -> source line (or None)
    word_bytes: int

    def next_addr(self, pc: int, length: int) -> int:
        nxt = pc + length
        if self.mode == WORD_ALIGNED:
            bpw = self.word_bytes
            nxt = ((nxt + bpw - 1) // bpw) * bpw
        return nxt

    def line_for(self, offset: int):
        return self.lines.get(offset)

    def offset_for_line(self, line: int):
        for off, ln in self.lines.items():
            if ln == line:
                return off
        return None


@dataclass
class Context:
    """Saved register file of one process."""

    spad: list
    stack: list
    sp: int
    pc: int
    flags: object


@dataclass
class Process:
    pid: int
    entry: LoadedProgram
    state: str = NEW
    context: Context = None
    stats: engine.ExecStats = field(default_factory=engine.ExecStats)
    diagnostic: str = None
    exit_clean: bool = False
    wait_reason: str = None


@dataclass
class TickResult:
    pid: int = None
    step: engine.StepResult = None
    idle: bool = False
    fault: Fault = None
    switched: bool = False


class OperatingSystem:
    """Owns the machine, the core map and the scheduler queues."""

    def __init__(self, machine):
        self.machine = machine
        self.config = machine.config
        self.core_map = []
        self.processes = {}
        self.ready = deque()
        self.running = None
        self.quantum_used = 0
        self._next_program_id = 0
        self._next_pid = 1

    # -------------------------------------------------------------- loading

    def load(self, image, options: LoadOptions = None) -> LoadedProgram:
        """Place an image into RAM, word-aligned or packed."""
        options = options or LoadOptions()
        bpw = self.config.ram_word_bytes
        base = options.base_address
        if base < 0 or base >= self.config.ram_word_count:
            raise ImageTooLarge(f"base word {base} outside RAM")
        offset_to_addr = {}
        placements = []  # (ram byte address, code bytes incl. padding)
        if options.mode == WORD_ALIGNED:
            cur_word = base
            for span in image.instr_map:
                chunk = image.data[span.offset:span.offset + span.length]
                words = (len(chunk) + bpw - 1) // bpw
                pad = words * bpw - len(chunk)
                offset_to_addr[span.offset] = cur_word * bpw
                placements.append((cur_word * bpw, chunk + b"\x00" * pad))
                cur_word += words
            end_word = cur_word
        elif options.mode == PACKED:
            cursor = base * bpw
            for span in image.instr_map:
                chunk = image.data[span.offset:span.offset + span.length]
                offset_to_addr[span.offset] = cursor
                placements.append((cursor, chunk))
                cursor += len(chunk)
            end_word = (cursor + bpw - 1) // bpw
        else:
            raise ValueError(f"unknown load mode {options.mode!r}")

        if end_word > self.config.ram_word_count:
            raise ImageTooLarge(
                f"image needs words [{base}, {end_word}) but RAM ends at "
                f"{self.config.ram_word_count}")
        for other in self.core_map:
            if base < other.end_word and other.base_word < end_word:
                raise OverlapsExistingEntry(
                    f"words [{base}, {end_word}) overlap program "
                    f"{other.program_id}")

        for addr, chunk in placements:
            self.machine.write_bytes(addr, chunk)

        entry = LoadedProgram(
            program_id=self._next_program_id,
            image=image,
            mode=options.mode,
            base_word=base,
            end_word=end_word,
            entry_addr=offset_to_addr.get(image.entry_offset, base * bpw),
            offset_to_addr=offset_to_addr,
            addr_to_offset={a: o for o, a in offset_to_addr.items()},
            start_byte=base * bpw,
            end_byte=end_word * bpw,
            lines={s.offset: s.line for s in image.instr_map},
            word_bytes=bpw,
        )
        self._next_program_id += 1
        self.core_map.append(entry)
        return entry

    def unload_all(self):
        self.core_map.clear()

    def core_map_table(self) -> str:
        lines = ["id  start  end    entry"]
        for e in self.core_map:
            lines.append(f"{e.program_id:<3d} {e.base_word:<6d} "
                         f"{e.end_word - 1:<6d} {e.entry_addr}")
        return "\n".join(lines)

    # ------------------------------------------------------------ processes

    def spawn(self, entry: LoadedProgram) -> Process:
        """Fresh isolated context: zeroed SPAD and STACK."""
        cfg = self.config
        context = Context(
            spad=[0] * cfg.spad_count,
            stack=[0] * cfg.stack_depth,
            sp=0 if cfg.stack_direction == "ascending" else cfg.stack_depth,
            pc=entry.entry_addr,
            flags=type(self.machine.flags)(),
        )
        proc = Process(self._next_pid, entry, NEW, context)
        self._next_pid += 1
        self.processes[proc.pid] = proc
        return proc

    def get(self, pid: int) -> Process:
        proc = self.processes.get(pid)
        if proc is None:
            raise UnknownPid(f"no process {pid}")
        return proc

    def admit(self, proc: Process):
        if proc.state != NEW:
            raise IllegalTransition(f"cannot admit a {proc.state} process")
        proc.state = READY
        self.ready.append(proc.pid)

    # ------------------------------------------------------ context switches

    def _save_context(self, proc: Process):
        m = self.machine
        proc.context = Context(list(m.spad), list(m.stack), m.sp, m.pc,
                               m.flags.copy())

    def _restore_context(self, proc: Process):
        m = self.machine
        m.spad[:] = proc.context.spad
        m.stack[:] = proc.context.stack
        m.sp = proc.context.sp
        m.pc = proc.context.pc
        m.flags = proc.context.flags.copy()

    def _switch_out(self, to_state: str, requeue: bool = False):
        proc = self.processes[self.running]
        self._save_context(proc)
        proc.state = to_state
        if requeue:
            self.ready.append(proc.pid)
        self.running = None
        self.quantum_used = 0

    def _switch_in(self, pid: int):
        proc = self.processes[pid]
        self._restore_context(proc)
        proc.state = RUNNING
        self.running = pid
        self.quantum_used = 0

    def preempt_to_front(self):
        """Park the running process ready, keeping its turn (next in line)."""
        if self.running is None:
            return
        proc = self.processes[self.running]
        self._save_context(proc)
        proc.state = READY
        self.ready.appendleft(proc.pid)
        self.running = None
        self.quantum_used = 0

    # ------------------------------------------------------------ scheduling

    def tick(self) -> TickResult:
        """Run one instruction of the head process; rotate on quantum end."""
        switched = False
        if self.running is None:
            if not self.ready:
                return TickResult(idle=True)
            self._switch_in(self.ready.popleft())
            switched = True
        proc = self.processes[self.running]
        try:
            step = engine.step(self.machine, proc.entry)
        except Fault as fault:
            self._save_context(proc)
            proc.state = DEAD
            proc.diagnostic = str(fault)
            self.running = None
            self.quantum_used = 0
            return TickResult(proc.pid, fault=fault, switched=switched)
        if step.waiting:
            proc.wait_reason = "input"
            self._switch_out(WAITING)
            return TickResult(proc.pid, step, switched=switched)
        proc.stats.instructions += 1
        proc.stats.cycles += step.cycles
        if step.halted:
            self._save_context(proc)
            proc.state = DEAD
            proc.exit_clean = True
            self.running = None
            self.quantum_used = 0
            return TickResult(proc.pid, step, switched=switched)
        self.quantum_used += 1
        if self.quantum_used >= self.config.quantum_instructions:
            self._switch_out(READY, requeue=True)
        return TickResult(proc.pid, step, switched=switched)

    def alive(self) -> bool:
        return any(p.state != DEAD for p in self.processes.values())

    def runnable(self) -> bool:
        return self.running is not None or bool(self.ready)

    def enqueue_input(self, value: int):
        """Queue one input value and wake every input-blocked process."""
        self.machine.input_queue.append(value)
        for proc in self.processes.values():
            if proc.state == WAITING and proc.wait_reason == "input":
                proc.state = READY
                proc.wait_reason = None
                self.ready.append(proc.pid)

    # ------------------------------------------------------ user transitions

    def user_step(self, pid: int) -> TickResult:
        """Run exactly one instruction of one process, then hold it ready."""
        proc = self.get(pid)
        if proc.state == NEW:
            raise IllegalTransition("admit the process before stepping")
        if proc.state not in (READY, RUNNING):
            raise IllegalTransition(f"cannot step a {proc.state} process")
        if self.running is not None and self.running != pid:
            self._switch_out(READY, requeue=True)
        if self.running is None:
            if pid in self.ready:
                self.ready.remove(pid)
            self._switch_in(pid)
        proc = self.processes[pid]
        try:
            step = engine.step(self.machine, proc.entry)
        except Fault as fault:
            self._save_context(proc)
            proc.state = DEAD
            proc.diagnostic = str(fault)
            self.running = None
            self.quantum_used = 0
            return TickResult(pid, fault=fault)
        if step.waiting:
            proc.wait_reason = "input"
            self._switch_out(WAITING)
            return TickResult(pid, step)
        proc.stats.instructions += 1
        proc.stats.cycles += step.cycles
        if step.halted:
            self._save_context(proc)
            proc.state = DEAD
            proc.exit_clean = True
            self.running = None
            self.quantum_used = 0
            return TickResult(pid, step)
        self._save_context(proc)
        proc.state = READY
        self.ready.appendleft(pid)
        self.running = None
        self.quantum_used = 0
        return TickResult(pid, step)

    def suspend(self, pid: int):
        proc = self.get(pid)
        if proc.state == RUNNING:
            proc.wait_reason = "user"
            self._switch_out(WAITING)
        elif proc.state == READY:
            self.ready.remove(pid)
            proc.state = WAITING
            proc.wait_reason = "user"
        else:
            raise IllegalTransition(f"cannot suspend a {proc.state} process")

    def resume(self, pid: int):
        proc = self.get(pid)
        if proc.state != WAITING:
            raise IllegalTransition(f"cannot resume a {proc.state} process")
        proc.state = READY
        proc.wait_reason = None
        self.ready.append(proc.pid)

    # ----------------------------------------------------------- flat runner

    def run(self, max_steps: int = 10_000_000, on_step=None) -> int:
        """Tick until every process is dead or everything is blocked."""
        steps = 0
        while steps < max_steps:
            if not self.alive():
                break
            if not self.runnable():
                break  # all waiting: needs input or a resume
            result = self.tick()
            if result.idle:
                break
            steps += 1
            if on_step is not None:
                on_step(result)
        return steps
