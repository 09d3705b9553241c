/** Pure panel models: snapshot in, renderable cell lists out.
 *
 * Keeping these DOM-free makes the zero-semantics rule checkable: every
 * value below is copied from a snapshot, never computed from machine
 * rules.
 */

import { formatValue } from "./format.js";
import type { ProcessView } from "./protocol.js";
import type { SessionView } from "./state.js";

export interface Cell {
  label: string;
  text: string;
  changed: boolean;
}

export function registerPanel(view: SessionView): Cell[] {
  const proc = view.selected();
  if (!proc) {
    return [];
  }
  const width = view.registerWidth();
  const changed = new Set(proc.changed_regs);
  return proc.spad.map((value, index) => ({
    label: `R${index}`,
    text: formatValue(value, width, view.panelBase),
    changed: changed.has(index),
  }));
}

export function controlPanel(view: SessionView): Cell[] {
  const proc = view.selected();
  if (!proc) {
    return [];
  }
  const flags = proc.sr;
  return [
    { label: "PC", text: String(proc.pc), changed: false },
    { label: "offset", text: proc.offset === null ? "-" : String(proc.offset),
      changed: false },
    { label: "line", text: proc.line === null ? "-" : String(proc.line),
      changed: false },
    { label: "SP", text: String(proc.sp), changed: false },
    { label: "SR", text: `Z=${flags.z} N=${flags.n} C=${flags.c} V=${flags.v}`,
      changed: false },
    { label: "state", text: proc.state, changed: false },
  ];
}

export function stackPanel(view: SessionView): Cell[] {
  const proc = view.selected();
  if (!proc) {
    return [];
  }
  const width = view.config?.stack_word_bits ?? 32;
  return proc.stack.map((value, index) => ({
    label: String(index),
    text: formatValue(value, width, view.panelBase),
    changed: false,
  }));
}

export function ramPanel(view: SessionView): Cell[] {
  if (!view.snapshot) {
    return [];
  }
  return view.snapshot.ram_dirty.map(([lo, hi]) => ({
    label: `${lo}..${hi}`,
    text: `${hi - lo + 1} word(s) written`,
    changed: true,
  }));
}

export interface ProcessRow {
  pid: string;
  state: ProcessView["state"];
  stats: ProcessView["stats"];
  diagnostic: string | null;
  selected: boolean;
  /** dead processes keep only reset usable */
  controlsEnabled: boolean;
}

export function processTable(view: SessionView): ProcessRow[] {
  if (!view.snapshot) {
    return [];
  }
  return Object.entries(view.snapshot.processes).map(([pid, proc]) => ({
    pid,
    state: proc.state,
    stats: proc.stats,
    diagnostic: proc.diagnostic,
    selected: pid === view.selectedPid,
    controlsEnabled: proc.state !== "dead",
  }));
}

export function statsPanel(view: SessionView): Cell[] {
  const proc = view.selected();
  if (!proc) {
    return [];
  }
  return [
    { label: "instructions", text: String(proc.stats.instructions),
      changed: false },
    { label: "cycles", text: String(proc.stats.cycles), changed: false },
    { label: "IPC", text: proc.stats.ipc.toFixed(4), changed: false },
    { label: "model time", text: `${proc.stats.model_time_s} s`,
      changed: false },
  ];
}
