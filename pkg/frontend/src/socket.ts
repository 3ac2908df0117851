/** Reconnecting websocket wrapper with backoff; thin browser glue. */

import { reconnectDelayMs } from "./backoff.js";

export interface SocketCallbacks {
  onMessage(text: string): void;
  onStatus(connected: boolean): void;
}

export class ReconnectingSocket {
  private ws: WebSocket | null = null;
  private attempt = 0;
  private closed = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(private readonly url: string, private readonly callbacks: SocketCallbacks) {}

  connect(): void {
    if (this.closed) return;
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.attempt = 0;
      this.callbacks.onStatus(true);
    };
    ws.onmessage = (ev: MessageEvent) => {
      if (typeof ev.data === "string") this.callbacks.onMessage(ev.data);
    };
    ws.onclose = () => {
      this.callbacks.onStatus(false);
      this.scheduleReconnect();
    };
    ws.onerror = () => ws.close();
  }

  private scheduleReconnect(): void {
    if (this.closed || this.timer !== null) return;
    const delay = reconnectDelayMs(this.attempt++);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.connect();
    }, delay);
  }

  send(text: string): boolean {
    if (this.ws !== null && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(text);
      return true;
    }
    return false;
  }

  close(): void {
    this.closed = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.ws?.close();
  }
}
