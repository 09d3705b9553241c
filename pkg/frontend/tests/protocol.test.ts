import { describe, expect, it } from "vitest";

import {
  ACTION_KINDS,
  actionToCommand,
  commandToActionKind,
  type ControlAction,
  parseServerLine,
} from "../src/protocol.js";

describe("action/command mapping", () => {
  it("is a bijection over the user-facing subset", () => {
    const samples: ControlAction[] = [
      { kind: "step", pid: 1 },
      { kind: "execute", pid: 2 },
      { kind: "resume", pid: 1 },
      { kind: "suspend", pid: 1 },
      { kind: "set_breakpoint", pid: 1, line: 3 },
      { kind: "set_clock", hz: 100 },
      { kind: "set_base", base: "hex" },
      { kind: "enqueue_input", value: 42 },
      { kind: "reset" },
    ];
    expect(samples.map((a) => a.kind).sort()).toEqual(
      [...ACTION_KINDS].sort());
    const seen = new Set<string>();
    for (const action of samples) {
      const command = actionToCommand(action);
      expect(command.cmd).toBe(action.kind);
      expect(commandToActionKind(command.cmd)).toBe(action.kind);
      expect(seen.has(command.cmd)).toBe(false);
      seen.add(command.cmd);
    }
    expect(commandToActionKind("load_source")).toBeNull();
  });

  it("passes the payload through untouched", () => {
    const command = actionToCommand(
      { kind: "set_breakpoint", pid: 4, offset: 21 });
    expect(command).toEqual({ cmd: "set_breakpoint", pid: 4, offset: 21 });
  });
});

describe("parseServerLine", () => {
  it("classifies responses and snapshot events", () => {
    const response = parseServerLine('{"ok": true, "cmd": "spawn"}');
    expect(response.type).toBe("response");
    const snapshot = parseServerLine(
      '{"event": "snapshot", "seq": 3, "data": {"processes": {}}}');
    expect(snapshot.type).toBe("snapshot");
    if (snapshot.type === "snapshot") {
      expect(snapshot.snapshot.seq).toBe(3);
    }
  });

  it("rejects unrecognized payloads", () => {
    expect(() => parseServerLine('{"weird": 1}')).toThrow();
  });
});
