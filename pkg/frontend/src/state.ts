/**
 * Client-side materialization of the event stream: a fold mirroring the
 * server's, kept to what the interface needs. The fold is pure; apply()
 * returns a new state object.
 */

import type { SessionEvent } from "./protocol.js";

export type Phase = "idle" | "open" | "closed";
export type RoleKind = "organizer" | "chair" | "participant" | "public";

export interface Role {
  kind: RoleKind;
  table: number | null;
}

export interface Note {
  id: string;
  author: string;
  text: string;
  area: string;
  createdAt: number;
  moves: number;
}

export interface ChatMessage {
  id: string;
  author: string;
  text: string;
  emoticon: string | null;
  at: number;
  origin: "local" | "remote";
}

export interface Table {
  id: number;
  phase: Phase;
  chair: string | null;
  conferenceUrl: string | null;
  areas: string[];
  notes: Map<string, Note>;
  chat: ChatMessage[];
  turnQueue: string[];
  round: number;
}

export interface WallEntry {
  noteId: string;
  promotedBy: string;
  at: number;
}

export interface SessionView {
  sessionId: string;
  title: string;
  organizer: string;
  rotationMinutes: number;
  recencyThresholdSeconds: number;
  emoticons: string[];
  privacyKind: "public" | "restricted";
  roles: Map<string, Role>;
  tables: Table[];
  wall: WallEntry[];
  archived: boolean;
  lastSeq: number;
  /** timestamp anchoring the rotation countdown (last Rotated or first open) */
  rotationAnchor: number | null;
}

export function emptyView(): SessionView {
  return {
    sessionId: "",
    title: "",
    organizer: "",
    rotationMinutes: 20,
    recencyThresholdSeconds: 300,
    emoticons: [],
    privacyKind: "public",
    roles: new Map(),
    tables: [],
    wall: [],
    archived: false,
    lastSeq: 0,
    rotationAnchor: null,
  };
}

export function foldEvent(view: SessionView, event: SessionEvent): SessionView {
  const next = cloneView(view);
  next.lastSeq = event.seq;
  const p = event.payload;
  switch (event.kind) {
    case "SessionCreated": {
      next.sessionId = p.session_id;
      next.title = p.title;
      next.organizer = p.organizer;
      next.rotationMinutes = p.rotation_minutes;
      next.recencyThresholdSeconds = p.recency_threshold_seconds;
      next.emoticons = [...p.emoticons];
      next.privacyKind = p.privacy.kind;
      next.roles.set(p.organizer, { kind: "organizer", table: null });
      next.tables = [];
      for (let i = 0; i < p.table_count; i++) {
        next.tables.push({
          id: i,
          phase: "idle",
          chair: null,
          conferenceUrl: null,
          areas: [...p.areas],
          notes: new Map(),
          chat: [],
          turnQueue: [],
          round: 0,
        });
      }
      break;
    }
    case "ChairAssigned": {
      const table = next.tables[p.table]!;
      const previous = table.chair;
      const existing = next.roles.get(p.user);
      if (existing?.kind === "chair" && existing.table !== p.table) {
        next.tables[existing.table!]!.chair = null;
      }
      if (previous && previous !== p.user) {
        next.roles.set(previous, { kind: "participant", table: p.table });
      }
      next.roles.set(p.user, { kind: "chair", table: p.table });
      table.chair = p.user;
      break;
    }
    case "TableOpened": {
      const table = next.tables[p.table]!;
      table.phase = "open";
      table.conferenceUrl = p.external_url;
      if (next.rotationAnchor === null) next.rotationAnchor = event.at;
      break;
    }
    case "TableClosed":
      next.tables[p.table]!.phase = "closed";
      break;
    case "Joined":
      next.roles.set(p.user, { kind: "participant", table: p.table });
      break;
    case "RoleChanged":
      if (p.to === "public") {
        next.roles.set(p.user, { kind: "public", table: null });
        const table = next.tables[p.cohort]!;
        table.turnQueue = table.turnQueue.filter((u) => u !== p.user);
      } else {
        next.roles.set(p.user, { kind: "participant", table: p.table });
      }
      break;
    case "NotePosted":
      next.tables[p.table]!.notes.set(p.note_id, {
        id: p.note_id,
        author: event.actor,
        text: p.text,
        area: p.area,
        createdAt: event.at,
        moves: 0,
      });
      break;
    case "NoteMoved": {
      const note = next.tables[p.table]!.notes.get(p.note_id);
      if (note) {
        note.area = p.to;
        note.moves += 1;
      }
      break;
    }
    case "ChatPosted":
      next.tables[p.table]!.chat.push({
        id: p.message_id,
        author: event.actor,
        text: p.text,
        emoticon: p.emoticon,
        at: event.at,
        origin: p.origin,
      });
      break;
    case "TurnRequested":
      next.tables[p.table]!.turnQueue.push(p.user);
      break;
    case "TurnGranted": {
      const table = next.tables[p.table]!;
      table.turnQueue = table.turnQueue.filter((u) => u !== p.user);
      break;
    }
    case "NotePromoted":
      next.wall.push({ noteId: p.note_id, promotedBy: event.actor, at: event.at });
      break;
    case "Rotated": {
      const moves = new Map<number, number>(p.moves as Array<[number, number]>);
      for (const [user, role] of next.roles) {
        if (role.kind === "participant" && role.table !== null && moves.has(role.table)) {
          next.roles.set(user, { kind: "participant", table: moves.get(role.table)! });
        }
      }
      for (const table of next.tables) {
        if (moves.has(table.id)) {
          table.round += 1;
          table.turnQueue = [];
        }
      }
      next.rotationAnchor = event.at;
      break;
    }
    case "SessionArchived":
      next.archived = true;
      break;
    default:
      break; // unknown kinds are ignored, forward compatible
  }
  return next;
}

function cloneView(view: SessionView): SessionView {
  return {
    ...view,
    roles: new Map(view.roles),
    emoticons: [...view.emoticons],
    wall: [...view.wall],
    tables: view.tables.map((t) => ({
      ...t,
      areas: [...t.areas],
      notes: new Map([...t.notes].map(([id, n]) => [id, { ...n }])),
      chat: [...t.chat],
      turnQueue: [...t.turnQueue],
    })),
  };
}
