/** Session view model: the latest snapshot plus pure display settings.
 *
 * The view renders only what the server sent; applySnapshot rejects
 * stale events so a reconnect can replay from the current sequence.
 */

import type {
  Base,
  MachineConfigInfo,
  ProcessView,
  SnapshotData,
  SnapshotEvent,
} from "./protocol.js";

export class SessionView {
  connected = false;
  lastSeq = 0;
  snapshot: SnapshotData | null = null;
  config: MachineConfigInfo | null = null;
  outputLog = "";
  panelBase: Base = "udec";
  selectedPid: string | null = null;

  applySnapshot(event: SnapshotEvent): boolean {
    if (event.seq <= this.lastSeq) {
      return false; // stale replay after a reconnect
    }
    this.lastSeq = event.seq;
    this.snapshot = event.data;
    this.outputLog += event.data.output_delta;
    const pids = Object.keys(event.data.processes);
    if (this.selectedPid === null || !pids.includes(this.selectedPid)) {
      this.selectedPid = pids.length ? pids[0] : null;
    }
    return true;
  }

  selected(): ProcessView | null {
    if (!this.snapshot || this.selectedPid === null) {
      return null;
    }
    return this.snapshot.processes[this.selectedPid] ?? null;
  }

  registerWidth(): number {
    return this.config?.register_width_bits ?? 32;
  }

  breakpointsFor(pid: string): number[] {
    return this.snapshot?.breakpoints?.[pid] ?? [];
  }

  reset(): void {
    // server-side reset restarts the sequence numbering too
    this.lastSeq = 0;
    this.snapshot = null;
    this.outputLog = "";
    this.selectedPid = null;
  }
}
