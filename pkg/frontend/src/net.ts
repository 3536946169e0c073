/** Websocket client: frame lines out, snapshots and events in.
 *
 * Sends are fire-and-forget; inbound snapshots overwrite a single
 * latest-snapshot slot that the render loop reads at its own pace. On
 * close the socket reconnects on a backoff schedule until stop().
 */
import { Backoff } from "./backoff.js";
import { parseServerLine, type CommandEvent, type Snapshot } from "./protocol.js";

export type ConnState = "connecting" | "open" | "closed";

export interface GameSocketHooks {
  onState?: (state: ConnState, detail: string) => void;
  onEvent?: (ev: CommandEvent) => void;
}

export class GameSocket {
  latestSnapshot: Snapshot | null = null;

  private ws: WebSocket | null = null;
  private stopped = false;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private readonly backoff = new Backoff({ baseMs: 500, capMs: 10_000 });

  constructor(
    private readonly url: string,
    private readonly hooks: GameSocketHooks = {},
  ) {}

  start(): void {
    this.stopped = false;
    this.connect();
  }

  /** True while frames can actually leave the machine. */
  get isOpen(): boolean {
    return this.ws !== null && this.ws.readyState === WebSocket.OPEN;
  }

  sendFrameLine(line: string): boolean {
    if (!this.isOpen) return false;
    this.ws!.send(line);
    return true;
  }

  stop(): void {
    this.stopped = true;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.reconnectTimer = null;
    this.ws?.close();
    this.ws = null;
  }

  private connect(): void {
    this.hooks.onState?.("connecting", this.url);
    const ws = new WebSocket(this.url);
    this.ws = ws;

    ws.onopen = () => {
      this.backoff.reset();
      this.hooks.onState?.("open", this.url);
    };
    ws.onmessage = (msg: MessageEvent) => {
      if (typeof msg.data !== "string") return;
      const parsed = parseServerLine(msg.data);
      if (parsed === null) return;
      if (parsed.kind === "snapshot") this.latestSnapshot = parsed.snapshot;
      else this.hooks.onEvent?.(parsed.event);
    };
    ws.onclose = (ev: CloseEvent) => {
      if (this.ws !== ws) return; // superseded by a newer socket
      this.ws = null;
      if (this.stopped) {
        this.hooks.onState?.("closed", "stopped");
        return;
      }
      const delay = this.backoff.nextDelayMs();
      this.hooks.onState?.(
        "closed",
        `code ${ev.code}; retrying in ${(delay / 1000).toFixed(1)}s`,
      );
      this.reconnectTimer = setTimeout(() => this.connect(), delay);
    };
  }
}
