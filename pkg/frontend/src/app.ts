/** Browser console wiring: panels left, editor and controls right. */

import { Connection } from "./connection.js";
import { BASES } from "./format.js";
import {
  controlPanel,
  processTable,
  ramPanel,
  registerPanel,
  stackPanel,
  statsPanel,
  type Cell,
} from "./panels.js";
import {
  actionToCommand,
  type Base,
  type ControlAction,
  type MachineConfigInfo,
  type Response,
} from "./protocol.js";
import { decodeScreenPayload } from "./screen.js";
import { SessionView } from "./state.js";

const DEMO_PROGRAM = `// prefix-sum demo
LDI R0, 3; LDI R1, 7; LDI R3, 35;
ADD X07,XD0,0,0,0;
STF 10,10,5,RED;
OUT R7;
HLT;
`;

const view = new SessionView();
let connection: Connection;
let busy = false;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function renderCells(containerId: string, cells: Cell[]): void {
  const container = el<HTMLElement>(containerId);
  container.textContent = "";
  for (const cell of cells) {
    const row = document.createElement("div");
    row.className = "cell" + (cell.changed ? " changed" : "");
    const label = document.createElement("span");
    label.className = "cell-label";
    label.textContent = cell.label;
    const value = document.createElement("span");
    value.className = "cell-value";
    value.textContent = cell.text;
    row.append(label, value);
    container.append(row);
  }
}

function renderProcesses(): void {
  const container = el<HTMLElement>("processes");
  container.textContent = "";
  for (const row of processTable(view)) {
    const div = document.createElement("div");
    div.className = "proc-row" + (row.selected ? " selected" : "");
    div.textContent =
      `pid ${row.pid}  ${row.state}  ` +
      `${row.stats.instructions} instr / ${row.stats.cycles} cyc` +
      (row.diagnostic ? `  [${row.diagnostic}]` : "");
    div.onclick = () => {
      view.selectedPid = row.pid;
      renderAll();
    };
    container.append(div);
  }
  const proc = view.selected();
  const dead = proc === null || proc.state === "dead";
  for (const id of ["btn-step", "btn-execute", "btn-suspend", "btn-resume"]) {
    el<HTMLButtonElement>(id).disabled = dead || busy;
  }
}

function renderAll(): void {
  renderCells("registers", registerPanel(view));
  renderCells("control", controlPanel(view));
  renderCells("stack", stackPanel(view));
  renderCells("ram", ramPanel(view));
  renderCells("stats", statsPanel(view));
  renderProcesses();
  el<HTMLElement>("console-out").textContent = view.outputLog;
}

function log(text: string): void {
  const node = el<HTMLElement>("log");
  node.textContent += text + "\n";
  node.scrollTop = node.scrollHeight;
}

function setBusy(value: boolean): void {
  busy = value;
  for (const button of document.querySelectorAll("button")) {
    if (button.id !== "btn-reset") {
      button.disabled = value;
    }
  }
  if (!value) {
    renderProcesses();
  }
}

async function request(command: { cmd: string } & Record<string, unknown>,
                       quiet = false): Promise<Response | null> {
  if (busy) {
    return null;
  }
  setBusy(true);
  try {
    const response = await connection.request(command);
    if (!response.ok && !quiet) {
      log(`error: ${response.error?.type}: ${response.error?.message}`);
    }
    return response;
  } catch (err) {
    log(`transport error: ${(err as Error).message}`);
    return null;
  } finally {
    setBusy(false);
  }
}

async function dispatch(action: ControlAction): Promise<Response | null> {
  return request(actionToCommand(action));
}

async function refreshScreen(): Promise<void> {
  const response = await connection.request({ cmd: "get_screen" });
  if (!response.ok || !response.result) {
    return;
  }
  const result = response.result as {
    p6_base64: string; width: number; height: number; pixel_size: number;
  };
  const image = decodeScreenPayload(result.p6_base64);
  const canvas = el<HTMLCanvasElement>("screen");
  canvas.width = image.width;
  canvas.height = image.height;
  const zoom = Math.max(1, result.pixel_size);
  canvas.style.width = `${image.width * zoom}px`;
  canvas.style.height = `${image.height * zoom}px`;
  const ctx = canvas.getContext("2d");
  if (ctx) {
    ctx.putImageData(
      new ImageData(image.rgba, image.width, image.height), 0, 0);
  }
}

function selectedPid(): number | null {
  return view.selectedPid === null ? null : Number(view.selectedPid);
}

async function assembleAndLoad(): Promise<void> {
  const source = el<HTMLTextAreaElement>("editor").value;
  const mode = el<HTMLSelectElement>("mode").value;
  const steps: Array<{ cmd: string } & Record<string, unknown>> = [
    { cmd: "load_source", source },
    { cmd: "assemble" },
    { cmd: "load_image", mode },
    { cmd: "spawn" },
  ];
  for (const command of steps) {
    const response = await request(command);
    if (!response || !response.ok) {
      return;
    }
    if (command.cmd === "load_source") {
      const diagnostics =
        (response.result as { diagnostics: string[] }).diagnostics;
      for (const diagnostic of diagnostics) {
        log(`diagnostic: ${diagnostic}`);
      }
      if (diagnostics.length) {
        return;
      }
    }
    if (command.cmd === "spawn") {
      log(`spawned pid ${(response.result as { pid: number }).pid}`);
    }
  }
  await refreshScreen();
}

function wireControls(): void {
  el<HTMLButtonElement>("btn-load").onclick = () => void assembleAndLoad();
  el<HTMLButtonElement>("btn-step").onclick = async () => {
    const pid = selectedPid();
    if (pid !== null) {
      await dispatch({ kind: "step", pid });
      await refreshScreen();
    }
  };
  el<HTMLButtonElement>("btn-execute").onclick = async () => {
    const pid = selectedPid();
    const response = await dispatch(
      pid === null ? { kind: "execute" } : { kind: "execute", pid });
    if (response?.ok) {
      const result = response.result as { stopped: string; offset?: number };
      log(`execute: ${result.stopped}` +
          (result.offset !== undefined ? ` at offset ${result.offset}` : ""));
    }
    await refreshScreen();
  };
  el<HTMLButtonElement>("btn-suspend").onclick = () => {
    const pid = selectedPid();
    if (pid !== null) {
      void dispatch({ kind: "suspend", pid });
    }
  };
  el<HTMLButtonElement>("btn-resume").onclick = () => {
    const pid = selectedPid();
    if (pid !== null) {
      void dispatch({ kind: "resume", pid });
    }
  };
  el<HTMLButtonElement>("btn-reset").onclick = async () => {
    view.reset();
    await request({ cmd: "reset" });
    await refreshScreen();
    renderAll();
  };
  el<HTMLButtonElement>("btn-break").onclick = () => {
    const pid = selectedPid();
    const line = Number(el<HTMLInputElement>("break-line").value);
    if (pid !== null && line > 0) {
      void dispatch({ kind: "set_breakpoint", pid, line });
      log(`breakpoint requested at line ${line}`);
    }
  };
  el<HTMLButtonElement>("btn-clock").onclick = () => {
    const hz = Number(el<HTMLInputElement>("clock-hz").value);
    if (hz >= 0) {
      void dispatch({ kind: "set_clock", hz });
    }
  };
  el<HTMLButtonElement>("btn-input").onclick = () => {
    const value = Number(el<HTMLInputElement>("input-value").value);
    if (Number.isFinite(value)) {
      void dispatch({ kind: "enqueue_input", value: Math.trunc(value) });
    }
  };
  const baseSelect = el<HTMLSelectElement>("base");
  for (const base of BASES) {
    const option = document.createElement("option");
    option.value = base;
    option.textContent = base;
    if (base === view.panelBase) {
      option.selected = true;
    }
    baseSelect.append(option);
  }
  baseSelect.onchange = () => {
    view.panelBase = baseSelect.value as Base;
    renderAll(); // pure client-side re-formatting
    void dispatch({ kind: "set_base", base: view.panelBase });
  };
}

function boot(): void {
  el<HTMLTextAreaElement>("editor").value = DEMO_PROGRAM;
  wireControls();
  const proto = location.protocol === "https:" ? "wss" : "ws";
  connection = new Connection(`${proto}://${location.host}/session`, {
    onEvent: (event) => {
      if (view.applySnapshot(event)) {
        renderAll();
      }
    },
    onStatus: (connected) => {
      view.connected = connected;
      const status = el<HTMLElement>("status");
      status.textContent = connected ? "connected" : "disconnected";
      status.className = connected ? "status-ok" : "status-bad";
      if (connected) {
        void (async () => {
          const response = await connection.request({ cmd: "get_config" });
          if (response.ok) {
            view.config = response.result as unknown as MachineConfigInfo;
          }
          await connection.request({ cmd: "get_snapshot" });
          await refreshScreen();
        })();
      }
    },
  });
  connection.connect();
  renderAll();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
