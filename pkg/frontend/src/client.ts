/**
 * SessionClient: one WebSocket to one session. Maintains the event-stream
 * materialization, optimistic pending commands, resume-from-seq reconnect,
 * and gap detection (a gap triggers an immediate resync reconnect).
 *
 * The socket constructor is injected so the same client runs in the
 * browser (window.WebSocket) and under node (the `ws` package).
 */

import {
  buildEnvelope,
  isErrorFrame,
  isEventFrame,
  parseFrame,
  serialize,
  type CommandType,
  type EventFrame,
  type ServerFrame,
} from "./protocol.js";
import { emptyView, foldEvent, type SessionView } from "./state.js";
import { project, type PendingCommand, type ViewModel, type ConnectionState } from "./viewmodel.js";

export interface SocketLike {
  onopen: ((this: any, ev: any) => any) | null;
  onmessage: ((this: any, ev: { data: any }) => any) | null;
  onclose: ((this: any, ev: any) => any) | null;
  onerror: ((this: any, ev: any) => any) | null;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientOptions {
  baseUrl: string; // ws://host:port
  session: string;
  token: string;
  actor: string;
  socketFactory: SocketFactory;
  now?: () => number;
  reconnectDelayMs?: number;
  maxNotices?: number;
}

export class SessionClient {
  view: SessionView = emptyView();
  connection: ConnectionState = "connecting";
  pending: PendingCommand[] = [];
  notices: string[] = [];

  private readonly options: ClientOptions;
  private socket: SocketLike | null = null;
  private clientSeq = 0;
  private nextExpectedSeq = 1;
  private listeners: Array<(client: SessionClient) => void> = [];
  private closedByUser = false;
  private readonly now: () => number;

  constructor(options: ClientOptions) {
    this.options = options;
    this.now = options.now ?? (() => Date.now());
  }

  connect(): void {
    this.closedByUser = false;
    this.open(this.view.lastSeq);
  }

  close(): void {
    this.closedByUser = true;
    this.connection = "closed";
    this.socket?.close();
    this.emit();
  }

  onChange(listener: (client: SessionClient) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  viewModel(now?: number): ViewModel {
    return project(this.view, this.options.actor, now ?? this.now(), {
      connection: this.connection,
      pending: this.pending,
      notices: this.notices,
    });
  }

  /** Send a command optimistically; it stays pending until the ack seq
   * arrives, and rolls back visibly if the server rejects it. */
  send(type: CommandType, payload: Record<string, unknown>): number {
    if (this.connection !== "live") {
      this.notice(`not connected: ${type} dropped`);
      return -1;
    }
    this.clientSeq += 1;
    const envelope = buildEnvelope(
      this.options.session,
      this.options.actor,
      this.clientSeq,
      type,
      payload,
      this.now(),
    );
    this.pending.push({ clientSeq: this.clientSeq, type, payload });
    this.socket!.send(serialize(envelope));
    this.emit();
    return this.clientSeq;
  }

  get lastSeq(): number {
    return this.view.lastSeq;
  }

  get isQuiescent(): boolean {
    return this.pending.length === 0 && this.connection === "live";
  }

  // --- internals ---

  private open(since: number): void {
    const url =
      `${this.options.baseUrl}/ws/${this.options.session}` +
      `?token=${encodeURIComponent(this.options.token)}&since=${since}`;
    const socket = this.options.socketFactory(url);
    this.socket = socket;
    this.nextExpectedSeq = since + 1;
    socket.onopen = () => {
      this.connection = "live";
      this.emit();
    };
    socket.onmessage = (message) => this.handleFrame(String(message.data));
    socket.onclose = () => {
      if (this.closedByUser) return;
      this.connection = "resyncing";
      // queued optimistic actions do not survive a drop
      if (this.pending.length) {
        this.notice(`connection lost: ${this.pending.length} unacked action(s) dropped`);
        this.pending = [];
      }
      this.emit();
      const delay = this.options.reconnectDelayMs ?? 500;
      setTimeout(() => {
        if (!this.closedByUser) this.open(this.view.lastSeq);
      }, delay);
    };
    socket.onerror = () => {
      /* onclose follows */
    };
  }

  private handleFrame(raw: string): void {
    let frame: ServerFrame;
    try {
      frame = parseFrame(raw);
    } catch {
      this.notice("unreadable frame ignored");
      return;
    }
    if (isEventFrame(frame)) {
      this.handleEvent(frame);
    } else if (isErrorFrame(frame)) {
      const ack = frame.ack;
      if (ack && ack.actor === this.options.actor) {
        this.pending = this.pending.filter((p) => p.clientSeq !== ack.client_seq);
        this.notice(`rejected: ${frame.error} ${frame.message ?? ""}`.trim());
      } else {
        this.notice(`server error: ${frame.error}`);
      }
    } else if (frame.duplicate) {
      // duplicate re-ack: the original event already materialized
      this.pending = this.pending.filter((p) => p.clientSeq !== frame.ack.client_seq);
    }
    this.emit();
  }

  private handleEvent(frame: EventFrame): void {
    if (frame.seq !== this.nextExpectedSeq) {
      // gap: force a resync from the last good seq
      this.connection = "resyncing";
      this.notice(`sequence gap (expected ${this.nextExpectedSeq}, got ${frame.seq}); resyncing`);
      this.socket?.close();
      return;
    }
    this.nextExpectedSeq += 1;
    this.view = foldEvent(this.view, frame.event);
    const ack = frame.ack;
    if (ack && ack.actor === this.options.actor) {
      this.pending = this.pending.filter((p) => p.clientSeq !== ack.client_seq);
    }
  }

  private notice(text: string): void {
    this.notices.push(text);
    const max = this.options.maxNotices ?? 20;
    if (this.notices.length > max) this.notices = this.notices.slice(-max);
  }

  private emit(): void {
    for (const listener of [...this.listeners]) listener(this);
  }
}
