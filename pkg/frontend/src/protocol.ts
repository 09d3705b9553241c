/** Wire types for the debug-service protocol and the action mapping.
 *
 * The client never simulates machine semantics: everything rendered
 * comes out of these payloads.
 */

export type Base = "bin" | "oct" | "udec" | "sdec" | "bcd" | "hex";

export interface ProcessStats {
  instructions: number;
  cycles: number;
  ipc: number;
  model_time_s: number;
}

export interface ProcessView {
  state: "new" | "ready" | "waiting" | "running" | "dead";
  spad: number[];
  pc: number;
  offset: number | null;
  line: number | null;
  sp: number;
  sr: { z: number; n: number; c: number; v: number };
  stack: number[];
  stats: ProcessStats;
  changed_regs: number[];
  diagnostic: string | null;
}

export interface SnapshotData {
  processes: Record<string, ProcessView>;
  ram_dirty: [number, number][];
  vram_crc: number[];
  output_delta: string;
  input_pending: number;
  breakpoints: Record<string, number[]>;
  core_map?: string;
}

export interface SnapshotEvent {
  event: "snapshot";
  seq: number;
  data: SnapshotData;
}

export interface ErrorDetail {
  type: string;
  message: string;
  line?: number;
  pc?: number;
}

export interface Response {
  ok: boolean;
  cmd?: string;
  id?: number;
  result?: Record<string, unknown>;
  error?: ErrorDetail;
}

export interface MachineConfigInfo {
  register_width_bits: number;
  spad_count: number;
  ram_word_bits: number;
  ram_word_count: number;
  stack_word_bits: number;
  stack_depth: number;
  stack_direction: string;
  endianness: string;
  screen_width_px: number;
  screen_height_px: number;
  layer_count: number;
  pixel_size: number;
  clock_hz: number;
  quantum_instructions: number;
}

/** User-facing control actions; each maps 1:1 onto a protocol command. */
export type ControlAction =
  | { kind: "step"; pid: number }
  | { kind: "execute"; pid?: number }
  | { kind: "resume"; pid: number }
  | { kind: "suspend"; pid: number }
  | { kind: "set_breakpoint"; pid: number; offset?: number; line?: number }
  | { kind: "set_clock"; hz: number }
  | { kind: "set_base"; base: Base }
  | { kind: "enqueue_input"; value: number }
  | { kind: "reset" };

export const ACTION_KINDS = [
  "step", "execute", "resume", "suspend", "set_breakpoint", "set_clock",
  "set_base", "enqueue_input", "reset",
] as const;

export type Command = { cmd: string } & Record<string, unknown>;

/** The action kind doubles as the command name; payload passes through. */
export function actionToCommand(action: ControlAction): Command {
  const { kind, ...payload } = action as { kind: string } &
    Record<string, unknown>;
  return { cmd: kind, ...payload };
}

export function commandToActionKind(cmd: string): string | null {
  return (ACTION_KINDS as readonly string[]).includes(cmd) ? cmd : null;
}

export type ServerLine =
  | { type: "response"; response: Response }
  | { type: "snapshot"; snapshot: SnapshotEvent };

export function parseServerLine(text: string): ServerLine {
  const parsed = JSON.parse(text) as Record<string, unknown>;
  if (parsed["event"] === "snapshot") {
    return { type: "snapshot", snapshot: parsed as unknown as SnapshotEvent };
  }
  if (typeof parsed["ok"] === "boolean") {
    return { type: "response", response: parsed as unknown as Response };
  }
  throw new Error(`unrecognized server line: ${text.slice(0, 80)}`);
}
