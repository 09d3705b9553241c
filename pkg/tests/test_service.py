"""Debug session protocol: commands, snapshots, breakpoints, pacing."""

import base64
import json
import time

import pytest

from peelsim.machine import MachineConfig
from peelsim.service import Session, handle_line

PREFIX_SRC = ("LDI R0, 3; LDI R1, 7; LDI R3, 35; "
              "ADD X07,XD0,0,0,0; HLT;")


def ok(session, command):
    response, events = session.handle(command)
    assert response["ok"], response
    return response["result"], events


def boot(src=PREFIX_SRC, config=None, mode="aligned"):
    session = Session(config or MachineConfig())
    ok(session, {"cmd": "load_source", "source": src})
    ok(session, {"cmd": "assemble"})
    ok(session, {"cmd": "load_image", "mode": mode})
    result, _ = ok(session, {"cmd": "spawn"})
    return session, result["pid"]


# ------------------------------------------------------------------ protocol

def test_malformed_request():
    session = Session()
    response, events = session.handle({"nope": 1})
    assert not response["ok"]
    assert response["error"]["type"] == "ProtocolError"
    assert events == []


def test_unknown_command():
    session = Session()
    response, _ = session.handle({"cmd": "frobnicate"})
    assert not response["ok"]


def test_request_id_echoed():
    session = Session()
    response, _ = session.handle({"cmd": "get_screen", "id": 42})
    assert response["id"] == 42


def test_handle_line_round_trip():
    session = Session()
    response, events = handle_line(
        session, json.dumps({"cmd": "load_source", "source": "HLT;"}))
    decoded = json.loads(response)
    assert decoded["ok"]
    assert events == []


def test_handle_line_bad_json():
    session = Session()
    response, events = handle_line(session, "{oops")
    assert not json.loads(response)["ok"]


def test_load_source_reports_diagnostics():
    session = Session()
    result, _ = ok(session, {"cmd": "load_source", "source": "LDI R0 3;"})
    assert result["diagnostics"]
    response, _ = session.handle({"cmd": "assemble"})
    assert not response["ok"]


def test_error_carries_source_location():
    session = Session()
    ok(session, {"cmd": "load_source", "source": "JMP nowhere;"})
    response, _ = session.handle({"cmd": "assemble"})
    assert response["error"]["type"] == "UndefinedLabel"
    assert response["error"]["line"] == 1


# ---------------------------------------------------------------- lifecycle

def test_step_through_program():
    session, pid = boot()
    for expected in ("LDI", "LDI", "LDI", "ADD"):
        result, events = ok(session, {"cmd": "step", "pid": pid})
        assert result["executed"] == expected
        assert len(events) == 1
    snap = events[0]["data"]["processes"][str(pid)]
    assert snap["spad"][5:8] == [3, 10, 45]
    assert snap["stats"]["instructions"] == 4
    result, _ = ok(session, {"cmd": "step", "pid": pid})
    assert result["executed"] == "HLT"
    assert result["state"] == "dead"


def test_step_after_death_is_an_error():
    session, pid = boot("HLT;")
    ok(session, {"cmd": "step", "pid": pid})
    response, _ = session.handle({"cmd": "step", "pid": pid})
    assert response["error"]["type"] == "IllegalTransition"


def test_execute_to_completion():
    session, pid = boot()
    result, events = ok(session, {"cmd": "execute", "pid": pid})
    assert result["stopped"] == "finished"
    snap = events[0]["data"]["processes"][str(pid)]
    assert snap["state"] == "dead"
    assert snap["spad"][5:8] == [3, 10, 45]


def test_changed_registers_marked():
    session, pid = boot("LDI R2, 9; NOP; HLT;")
    _, events = ok(session, {"cmd": "step", "pid": pid})
    assert events[0]["data"]["processes"][str(pid)]["changed_regs"] == [2]
    _, events = ok(session, {"cmd": "step", "pid": pid})
    assert events[0]["data"]["processes"][str(pid)]["changed_regs"] == []


def test_snapshot_sequence_monotonic_and_replayable():
    log = [
        {"cmd": "load_source", "source": "LDI R0,1; OUT R0; HLT;"},
        {"cmd": "assemble"},
        {"cmd": "load_image", "mode": "packed"},
        {"cmd": "spawn"},
        {"cmd": "step", "pid": 1},
        {"cmd": "execute", "pid": 1},
        {"cmd": "get_snapshot"},
    ]

    def replay():
        session = Session(MachineConfig())
        stream = []
        for command in log:
            _, events = session.handle(command)
            stream.extend(events)
        return stream

    first, second = replay(), replay()
    sequences = [e["seq"] for e in first]
    assert sequences == sorted(sequences)
    assert len(set(sequences)) == len(sequences)
    assert first == second


def test_output_delta():
    session, pid = boot("OUT 1; OUT 2; HLT;")
    _, events = ok(session, {"cmd": "step", "pid": pid})
    assert events[0]["data"]["output_delta"] == "1\n"
    _, events = ok(session, {"cmd": "step", "pid": pid})
    assert events[0]["data"]["output_delta"] == "2\n"


def test_suspend_resume_roundtrip():
    session, pid = boot()
    result, _ = ok(session, {"cmd": "suspend", "pid": pid})
    assert result["state"] == "waiting"
    result, _ = ok(session, {"cmd": "execute"})
    assert result["stopped"] == "blocked"
    ok(session, {"cmd": "resume", "pid": pid})
    result, _ = ok(session, {"cmd": "execute"})
    assert result["stopped"] == "finished"


def test_input_queue_flow():
    session, pid = boot("INP R0; OUT R0; HLT;")
    result, _ = ok(session, {"cmd": "execute", "pid": pid})
    assert result["stopped"] == "blocked"
    ok(session, {"cmd": "enqueue_input", "value": 99})
    result, events = ok(session, {"cmd": "execute"})
    assert result["stopped"] == "finished"
    assert events[0]["data"]["output_delta"] == "99\n"


def test_set_base_affects_out():
    session, pid = boot("OUT 255; HLT;")
    ok(session, {"cmd": "set_base", "base": "hex"})
    _, events = ok(session, {"cmd": "execute", "pid": pid})
    assert events[0]["data"]["output_delta"] == "000000FF\n"


def test_reset_clears_machine():
    session, pid = boot("LDI R0, 5; HLT;")
    ok(session, {"cmd": "execute", "pid": pid})
    result, events = ok(session, {"cmd": "reset"})
    assert result["reset"]
    assert events[0]["data"]["processes"] == {}
    # the assembled image survives a reset; reload and rerun
    ok(session, {"cmd": "load_image"})
    result, _ = ok(session, {"cmd": "spawn"})
    ok(session, {"cmd": "execute", "pid": result["pid"]})


# --------------------------------------------------------------- breakpoints

def test_breakpoint_stops_before_instruction():
    session, pid = boot()
    # line 1 holds all five statements; break on the ADD by offset
    offsets = [s.offset for s in session.image.instr_map]
    ok(session, {"cmd": "set_breakpoint", "pid": pid, "offset": offsets[3]})
    result, events = ok(session, {"cmd": "execute", "pid": pid})
    assert result == {"stopped": "breakpoint", "pid": pid,
                      "offset": offsets[3], "steps": 3}
    snap = events[0]["data"]["processes"][str(pid)]
    assert snap["state"] == "ready"  # held, first in line
    assert snap["offset"] == offsets[3]
    assert snap["spad"][5:8] == [0, 0, 0]  # ADD not yet executed
    result, _ = ok(session, {"cmd": "execute", "pid": pid})
    assert result["stopped"] == "finished"


def test_breakpoint_by_line():
    src = "LDI R0, 1;\nLDI R1, 2;\nADD R0, R1;\nHLT;"
    session, pid = boot(src)
    ok(session, {"cmd": "set_breakpoint", "pid": pid, "line": 3})
    result, _ = ok(session, {"cmd": "execute", "pid": pid})
    assert result["stopped"] == "breakpoint"
    _, events = ok(session, {"cmd": "get_snapshot"})
    assert events[0]["data"]["processes"][str(pid)]["line"] == 3


def test_clear_breakpoint():
    session, pid = boot()
    ok(session, {"cmd": "set_breakpoint", "pid": pid, "offset": 0})
    ok(session, {"cmd": "clear_breakpoint", "pid": pid, "offset": 0})
    result, _ = ok(session, {"cmd": "execute", "pid": pid})
    assert result["stopped"] == "finished"


def test_step_over_breakpoint_then_execute():
    session, pid = boot()
    offsets = [s.offset for s in session.image.instr_map]
    ok(session, {"cmd": "set_breakpoint", "pid": pid, "offset": offsets[1]})
    ok(session, {"cmd": "execute", "pid": pid})       # stops at offsets[1]
    ok(session, {"cmd": "step", "pid": pid})          # runs the bp line
    result, _ = ok(session, {"cmd": "execute", "pid": pid})
    assert result["stopped"] == "finished"


# -------------------------------------------------------------------- stats

def test_stats_command():
    config = MachineConfig(cpi_table={"LDI": 2}, clock_hz=1_000_000)
    session, pid = boot("LDI R0,1; LDI R1,2; LDI R2,3; HLT;", config=config)
    ok(session, {"cmd": "execute", "pid": pid})
    stats, _ = ok(session, {"cmd": "stats", "pid": pid})
    assert stats == {"instructions": 4, "cycles": 7, "ipc": 0.5714,
                     "model_time_s": 7 / 1_000_000}


def test_set_cpi_command():
    session, pid = boot("LDI R0,1; HLT;")
    ok(session, {"cmd": "set_cpi", "mnemonic": "ldi", "cycles": 5})
    ok(session, {"cmd": "execute", "pid": pid})
    stats, _ = ok(session, {"cmd": "stats", "pid": pid})
    assert stats["cycles"] == 6


def test_model_time_example():
    config = MachineConfig(clock_hz=1_000_000)
    session, pid = boot("NOP;" * 19 + "HLT;", config=config)
    ok(session, {"cmd": "execute", "pid": pid})
    stats, _ = ok(session, {"cmd": "stats", "pid": pid})
    assert stats["cycles"] == 20
    assert stats["model_time_s"] == 20e-6


# ------------------------------------------------------------------- screen

def test_get_config():
    session = Session(MachineConfig(register_width_bits=16,
                                    ram_word_bits=16))
    result, _ = ok(session, {"cmd": "get_config"})
    assert result["register_width_bits"] == 16
    assert result["spad_count"] == 16
    assert result["layer_count"] == 8


def test_get_screen_payload():
    session, pid = boot("STF 0,0,2,RED; HLT;")
    ok(session, {"cmd": "execute", "pid": pid})
    result, _ = ok(session, {"cmd": "get_screen"})
    p6 = base64.b64decode(result["p6_base64"])
    assert p6.startswith(b"P6\n320 240\n255\n")
    header_len = len(b"P6\n320 240\n255\n")
    assert p6[header_len:header_len + 3] == b"\xff\x00\x00"
    assert len(result["layer_crcs"]) == 8


# ------------------------------------------------------------------- pacing

def test_pacing_neutral_and_timed():
    def final_snapshot(pace):
        config = MachineConfig(clock_hz=100)
        session, pid = boot("NOP;" * 19 + "HLT;", config=config)
        if pace:
            ok(session, {"cmd": "set_clock", "hz": 100})
        start = time.perf_counter()
        ok(session, {"cmd": "execute", "pid": pid})
        elapsed = time.perf_counter() - start
        _, events = ok(session, {"cmd": "get_snapshot"})
        data = events[0]["data"]
        return json.dumps(data, sort_keys=True), elapsed

    paced, paced_time = final_snapshot(True)
    unpaced, unpaced_time = final_snapshot(False)
    assert paced == unpaced
    assert 0.16 <= paced_time <= 0.24
    assert unpaced_time < 0.05
