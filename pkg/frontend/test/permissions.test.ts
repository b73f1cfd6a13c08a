import assert from "node:assert/strict";
import { test } from "node:test";

import { allows } from "../src/permissions.js";
import type { Role } from "../src/state.js";

const organizer: Role = { kind: "organizer", table: null };
const chair2: Role = { kind: "chair", table: 2 };
const participant1: Role = { kind: "participant", table: 1 };
const spectator: Role = { kind: "public", table: null };

test("matrix mirrors the server", () => {
  assert.equal(allows(spectator, "post_note", 0), false);
  assert.equal(allows(spectator, "join_table", 0), true);
  assert.equal(allows(chair2, "open_table", 2), true);
  assert.equal(allows(chair2, "open_table", 1), false);
  assert.equal(allows(chair2, "request_turn", 2), false);
  assert.equal(allows(chair2, "switch_to_public", 2), false);
  assert.equal(allows(participant1, "move_note", 1), true);
  assert.equal(allows(participant1, "move_note", 0), false);
  assert.equal(allows(participant1, "grant_turn", 1), false);
  assert.equal(allows(participant1, "switch_to_public", 1), true);
  assert.equal(allows(organizer, "rotate", null), true);
  assert.equal(allows(organizer, "archive_session", null), true);
});
