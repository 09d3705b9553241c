/** WebSocket transport: serialized requests, pushed snapshot events.
 *
 * One mutating command is in flight at a time; requests made while
 * disconnected reject immediately. Responses arrive strictly in request
 * order (the server handles commands serially), snapshot events arrive
 * interleaved and go to the event callback.
 */

import {
  actionToCommand,
  type Command,
  type ControlAction,
  parseServerLine,
  type Response,
  type SnapshotEvent,
} from "./protocol.js";

type WebSocketLike = {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
};

export interface ConnectionOptions {
  onEvent?: (event: SnapshotEvent) => void;
  onStatus?: (connected: boolean) => void;
  /** injectable for tests; defaults to the global WebSocket */
  factory?: (url: string) => WebSocketLike;
  reconnectDelayMs?: number;
}

interface Pending {
  resolve: (response: Response) => void;
  reject: (err: Error) => void;
}

export class Connection {
  private socket: WebSocketLike | null = null;
  private pending: Pending[] = [];
  private closed = false;

  constructor(private url: string, private opts: ConnectionOptions = {}) {}

  connect(): void {
    this.closed = false;
    const factory = this.opts.factory ??
      ((u: string) => new WebSocket(u) as unknown as WebSocketLike);
    const socket = factory(this.url);
    this.socket = socket;
    socket.onopen = () => this.opts.onStatus?.(true);
    socket.onmessage = (ev) => this.handleLine(String(ev.data));
    socket.onerror = () => undefined;
    socket.onclose = () => {
      this.socket = null;
      this.failPending("connection lost");
      this.opts.onStatus?.(false);
      if (!this.closed) {
        setTimeout(() => this.connect(), this.opts.reconnectDelayMs ?? 1000);
      }
    };
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
    this.socket = null;
    this.failPending("connection closed");
  }

  get isConnected(): boolean {
    return this.socket !== null;
  }

  private failPending(reason: string): void {
    const waiting = this.pending;
    this.pending = [];
    for (const p of waiting) {
      p.reject(new Error(reason));
    }
  }

  private handleLine(text: string): void {
    const line = parseServerLine(text);
    if (line.type === "snapshot") {
      this.opts.onEvent?.(line.snapshot);
      return;
    }
    const pending = this.pending.shift();
    pending?.resolve(line.response);
  }

  request(command: Command): Promise<Response> {
    if (!this.socket) {
      return Promise.reject(new Error("not connected"));
    }
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.socket!.send(JSON.stringify(command));
    });
  }

  dispatch(action: ControlAction): Promise<Response> {
    return this.request(actionToCommand(action));
  }
}
