/**
 * Wire protocol types and helpers. One single-line JSON object per frame;
 * the command/event envelope field names are fixed by the server contract.
 */

export const PROTOCOL_VERSION = 1;

export type CommandType =
  | "assign_chair"
  | "open_table"
  | "set_audience"
  | "close_table"
  | "join_table"
  | "switch_to_public"
  | "post_note"
  | "move_note"
  | "post_chat"
  | "request_turn"
  | "grant_turn"
  | "promote_note"
  | "rotate"
  | "archive_session";

export interface CommandEnvelope {
  v: number;
  session: string;
  actor: string;
  client_seq: number;
  type: CommandType;
  payload: Record<string, unknown>;
  ts: number;
}

export interface SessionEvent {
  seq: number;
  at: number;
  actor: string;
  kind: string;
  payload: Record<string, any>;
}

export interface EventFrame {
  v: number;
  session: string;
  seq: number;
  event: SessionEvent;
  ack: { actor: string; client_seq: number } | null;
}

export interface AckFrame {
  v: number;
  session: string;
  ack: { actor: string; client_seq: number };
  seq: number;
  duplicate: boolean;
}

export interface ErrorFrame {
  v: number;
  error: string;
  message: string;
  session?: string;
  ack?: { actor: string; client_seq: number };
}

export type ServerFrame = EventFrame | AckFrame | ErrorFrame;

export function isEventFrame(frame: ServerFrame): frame is EventFrame {
  return "event" in frame && (frame as EventFrame).event != null;
}

export function isErrorFrame(frame: ServerFrame): frame is ErrorFrame {
  return "error" in frame;
}

export function isAckFrame(frame: ServerFrame): frame is AckFrame {
  return !isEventFrame(frame) && !isErrorFrame(frame) && "ack" in frame;
}

export function parseFrame(raw: string): ServerFrame {
  return JSON.parse(raw) as ServerFrame;
}

export function buildEnvelope(
  session: string,
  actor: string,
  clientSeq: number,
  type: CommandType,
  payload: Record<string, unknown>,
  ts: number,
): CommandEnvelope {
  return { v: PROTOCOL_VERSION, session, actor, client_seq: clientSeq, type, payload, ts };
}

export function serialize(envelope: CommandEnvelope): string {
  return JSON.stringify(envelope);
}
