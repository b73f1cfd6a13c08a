/**
 * ViewModel: a pure projection of (events -> SessionView) + local clock +
 * unacked optimistic commands. Everything the interface renders comes from
 * here; there is no other client-side state.
 */

import { allows } from "./permissions.js";
import type { CommandType } from "./protocol.js";
import type { Role, SessionView } from "./state.js";

export type ConnectionState = "connecting" | "live" | "resyncing" | "closed";
export type Recency = "recent" | "old";
export type Visibility = "full" | "summary";

export interface NoteVM {
  id: string;
  author: string;
  text: string;
  recency: Recency;
  pending: boolean;
}

export interface AreaVM {
  name: string;
  notes: NoteVM[];
}

export interface TableVM {
  id: number;
  phase: string;
  chair: string | null;
  conferenceUrl: string | null;
  visibility: Visibility;
  round: number;
  areas: AreaVM[];
  noteCount: number;
  chat: { author: string; text: string; emoticon: string | null; recency: Recency }[];
  turnQueue: string[];
  myQueuePosition: number | null;
}

export interface WallVM {
  noteId: string;
  text: string;
  promotedBy: string;
}

export interface ControlsVM {
  canPostNote: boolean;
  canMoveNote: boolean;
  canChat: boolean;
  canRequestTurn: boolean;
  canGrantTurn: boolean;
  canPromoteNote: boolean;
  canOpenTable: boolean;
  canCloseTable: boolean;
  canRotate: boolean;
  canArchive: boolean;
  canAssignChair: boolean;
  canSwitchToPublic: boolean;
  canJoin: boolean;
}

export interface PendingCommand {
  clientSeq: number;
  type: CommandType;
  payload: Record<string, unknown>;
}

export interface ViewModel {
  connection: ConnectionState;
  sessionId: string;
  title: string;
  me: string;
  myRole: Role;
  archived: boolean;
  lastSeq: number;
  rotationCountdownMs: number | null;
  emoticons: string[];
  tables: TableVM[];
  wall: WallVM[];
  controls: ControlsVM;
  pending: PendingCommand[];
  notices: string[];
}

export interface ProjectOptions {
  connection?: ConnectionState;
  pending?: PendingCommand[];
  notices?: string[];
}

export function roleOf(view: SessionView, user: string): Role {
  return view.roles.get(user) ?? { kind: "public", table: null };
}

export function recencyClass(createdAt: number, now: number, thresholdSeconds: number): Recency {
  return now - createdAt <= thresholdSeconds * 1000 ? "recent" : "old";
}

export function project(
  view: SessionView,
  me: string,
  now: number,
  options: ProjectOptions = {},
): ViewModel {
  const myRole = roleOf(view, me);
  const pending = options.pending ?? [];
  const tables = view.tables.map((table) => projectTable(view, table, myRole, me, now, pending));
  const noteText = new Map<string, string>();
  for (const table of view.tables) {
    for (const note of table.notes.values()) noteText.set(note.id, note.text);
  }
  return {
    connection: options.connection ?? "live",
    sessionId: view.sessionId,
    title: view.title,
    me,
    myRole,
    archived: view.archived,
    lastSeq: view.lastSeq,
    rotationCountdownMs: countdown(view, now),
    emoticons: [...view.emoticons],
    tables,
    wall: view.wall.map((entry) => ({
      noteId: entry.noteId,
      text: noteText.get(entry.noteId) ?? "",
      promotedBy: entry.promotedBy,
    })),
    controls: controlsFor(view, myRole),
    pending: [...pending],
    notices: [...(options.notices ?? [])],
  };
}

function projectTable(
  view: SessionView,
  table: SessionView["tables"][number],
  myRole: Role,
  me: string,
  now: number,
  pending: PendingCommand[],
): TableVM {
  const visibility = tableVisibility(myRole, table.id);
  const pendingMoves = new Map<string, string>();
  const pendingNotes: { table: number; text: string; area: string; clientSeq: number }[] = [];
  for (const command of pending) {
    if (command.type === "move_note" && command.payload.table === table.id) {
      pendingMoves.set(String(command.payload.note_id), String(command.payload.to_area));
    }
    if (command.type === "post_note" && command.payload.table === table.id) {
      pendingNotes.push({
        table: table.id,
        text: String(command.payload.text),
        area: String(command.payload.area ?? "unsorted"),
        clientSeq: command.clientSeq,
      });
    }
  }
  const areas: AreaVM[] = table.areas.map((name) => ({ name, notes: [] }));
  const areaByName = new Map(areas.map((a) => [a.name, a]));
  const sortedNotes = [...table.notes.values()].sort((a, b) =>
    a.createdAt - b.createdAt || a.id.localeCompare(b.id));
  for (const note of sortedNotes) {
    const optimisticArea = pendingMoves.get(note.id);
    const target = areaByName.get(optimisticArea ?? note.area);
    target?.notes.push({
      id: note.id,
      author: note.author,
      text: note.text,
      recency: recencyClass(note.createdAt, now, view.recencyThresholdSeconds),
      pending: optimisticArea !== undefined,
    });
  }
  for (const draft of pendingNotes) {
    areaByName.get(draft.area)?.notes.push({
      id: `pending-${draft.clientSeq}`,
      author: me,
      text: draft.text,
      recency: "recent",
      pending: true,
    });
  }
  const queue = table.turnQueue;
  const position = queue.indexOf(me);
  return {
    id: table.id,
    phase: table.phase,
    chair: table.chair,
    conferenceUrl: table.conferenceUrl,
    visibility,
    round: table.round,
    areas: visibility === "full" ? areas : [],
    noteCount: table.notes.size,
    chat:
      visibility === "full"
        ? table.chat.map((m) => ({
            author: m.author,
            text: m.text,
            emoticon: m.emoticon,
            recency: recencyClass(m.at, now, view.recencyThresholdSeconds),
          }))
        : [],
    turnQueue: [...queue],
    myQueuePosition: position >= 0 ? position + 1 : null,
  };
}

/** Seated users see their own table in full and the rest as summaries;
 * organizers and spectators overview everything. */
function tableVisibility(myRole: Role, tableId: number): Visibility {
  if (myRole.kind === "organizer" || myRole.kind === "public") return "full";
  return myRole.table === tableId ? "full" : "summary";
}

function countdown(view: SessionView, now: number): number | null {
  if (view.rotationAnchor === null) return null;
  if (!view.tables.some((t) => t.phase === "open")) return null;
  const period = view.rotationMinutes * 60_000;
  return Math.max(0, view.rotationAnchor + period - now);
}

function controlsFor(view: SessionView, myRole: Role): ControlsVM {
  const table = myRole.table;
  const archived = view.archived;
  const gate = (command: CommandType, scope: number | null) =>
    !archived && allows(myRole, command, scope);
  return {
    canPostNote: gate("post_note", table),
    canMoveNote: gate("move_note", table),
    canChat: gate("post_chat", table),
    canRequestTurn: gate("request_turn", table),
    canGrantTurn: gate("grant_turn", table),
    canPromoteNote: gate("promote_note", table),
    canOpenTable: gate("open_table", table),
    canCloseTable: gate("close_table", table),
    canRotate: !archived && myRole.kind === "organizer",
    canArchive: !archived && myRole.kind === "organizer",
    canAssignChair: !archived && myRole.kind === "organizer",
    canSwitchToPublic: gate("switch_to_public", table),
    canJoin: !archived && myRole.kind === "public",
  };
}

/** Canonical serialization used by convergence checks: stable key order,
 * no Maps, no local-only fields (connection, notices). */
export function canonical(vm: ViewModel): string {
  const { connection: _connection, notices: _notices, ...rest } = vm;
  return JSON.stringify(rest, (_key, value) => {
    if (value instanceof Map) {
      return Object.fromEntries([...value.entries()].sort());
    }
    return value;
  });
}
