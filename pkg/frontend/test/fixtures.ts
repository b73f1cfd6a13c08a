/** Event fixtures mirroring the server's payload shapes. */

import type { SessionEvent } from "../src/protocol.js";

let seq = 0;

export function resetSeq(): void {
  seq = 0;
}

export function event(
  kind: string,
  payload: Record<string, any>,
  actor = "org",
  at = 0,
): SessionEvent {
  seq += 1;
  return { seq, at, actor, kind, payload };
}

export function sessionCreated(overrides: Record<string, any> = {}): SessionEvent {
  return event("SessionCreated", {
    session_id: "s1",
    organizer: "org",
    title: "Energy Futures",
    table_count: 2,
    rotation_minutes: 20,
    areas: ["unsorted", "ideas", "agreed"],
    privacy: { kind: "public" },
    recency_threshold_seconds: 300,
    emoticons: [":)", "+1"],
    ...overrides,
  });
}

export function standardOpening(): SessionEvent[] {
  resetSeq();
  return [
    sessionCreated(),
    event("ChairAssigned", { table: 0, user: "cA", previous: null }),
    event("TableOpened", {
      table: 0,
      external_url: "https://conf/0",
      audience: { kind: "public" },
    }),
    event("Joined", { user: "alice", table: 0 }, "alice"),
  ];
}
