/**
 * End-to-end against the real server: two clients on one scripted session.
 * Asserts convergence after quiescence, sub-second NoteMoved propagation,
 * disabled mutation controls for a public client, and visible rollback of
 * a rejected optimistic command.
 *
 * Requires the python package to be installed (pip install -e ..).
 */

import assert from "node:assert/strict";
import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { after, before, test } from "node:test";
import WebSocket from "ws";

import { SessionClient } from "../src/client.js";
import { canonical, project } from "../src/viewmodel.js";

const PORT = 8902;
const BASE = `http://127.0.0.1:${PORT}`;
const SESSION = "e2e";

let server: ChildProcess;
let workdir: string;

function socketFactory(url: string) {
  return new WebSocket(url) as any;
}

async function rest(path: string, body: unknown, token = "org"): Promise<any> {
  const response = await fetch(`${BASE}${path}`, {
    method: "POST",
    headers: { "content-type": "application/json", authorization: `Bearer ${token}` },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    throw new Error(`${path} -> ${response.status}: ${await response.text()}`);
  }
  return response.json();
}

function waitFor(
  client: SessionClient,
  predicate: () => boolean,
  label: string,
  timeoutMs = 5000,
): Promise<void> {
  return new Promise((resolve, reject) => {
    if (predicate()) return resolve();
    const timer = setTimeout(() => {
      unsubscribe();
      reject(new Error(`timeout waiting for ${label}`));
    }, timeoutMs);
    const unsubscribe = client.onChange(() => {
      if (predicate()) {
        clearTimeout(timer);
        unsubscribe();
        resolve();
      }
    });
  });
}

before(async () => {
  workdir = mkdtempSync(join(tmpdir(), "scicafe-e2e-"));
  const configPath = join(workdir, "config.json");
  writeFileSync(
    configPath,
    JSON.stringify({
      listen: `127.0.0.1:${PORT}`,
      storage_dir: join(workdir, "data"),
      rotation_tick_seconds: 0.2,
    }),
  );
  server = spawn("python3", ["-m", "scicafe.cli.main", "serve"], {
    env: { ...process.env, SCICAFE_CONFIG: configPath },
    stdio: "ignore",
  });
  const deadline = Date.now() + 15_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) break;
    } catch {
      /* not up yet */
    }
    if (Date.now() > deadline) throw new Error("server did not come up");
    await new Promise((r) => setTimeout(r, 200));
  }
  await rest("/sessions", {
    title: "E2E",
    tables: 2,
    session_id: SESSION,
    areas: ["unsorted", "ideas", "agreed"],
  });
  await rest(`/sessions/${SESSION}/commands`, {
    type: "assign_chair",
    payload: { table: 0, user: "chair0" },
  });
  await rest(
    `/sessions/${SESSION}/commands`,
    { type: "open_table", payload: { table: 0, external_url: "https://conf/0" } },
    "chair0",
  );
});

after(() => {
  server?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

test("two clients converge; drag round-trips within a second; public is read-only", async () => {
  const alice = new SessionClient({
    baseUrl: `ws://127.0.0.1:${PORT}`,
    session: SESSION,
    token: "alice",
    actor: "alice",
    socketFactory,
  });
  const bob = new SessionClient({
    baseUrl: `ws://127.0.0.1:${PORT}`,
    session: SESSION,
    token: "bob",
    actor: "bob",
    socketFactory,
  });
  alice.connect();
  bob.connect();
  await waitFor(alice, () => alice.connection === "live" && alice.lastSeq >= 3, "alice live");
  await waitFor(bob, () => bob.connection === "live" && bob.lastSeq >= 3, "bob live");

  // alice joins and posts through the optimistic path
  alice.send("join_table", { table: 0 });
  await waitFor(alice, () => alice.viewModel().myRole.kind === "participant", "alice seated");
  alice.send("post_note", { table: 0, text: "car pooling", area: "unsorted" });
  await waitFor(alice, () => alice.isQuiescent, "post acked");
  await waitFor(bob, () => bob.lastSeq === alice.lastSeq, "bob caught up");

  const noteId = [...bob.view.tables[0]!.notes.keys()][0]!;

  // the drag: what the drop handler sends, measured to the other client
  const t0 = Date.now();
  alice.send("move_note", { table: 0, note_id: noteId, to_area: "agreed" });
  await waitFor(
    bob,
    () => bob.view.tables[0]!.notes.get(noteId)?.area === "agreed",
    "move visible on the other client",
    2000,
  );
  const elapsed = Date.now() - t0;
  assert.ok(elapsed < 1000, `NoteMoved took ${elapsed}ms to reach the other client`);

  // quiescence, then convergence: identical materializations, and identical
  // ViewModels when projected from the same vantage point
  await waitFor(alice, () => alice.isQuiescent, "alice quiescent");
  await waitFor(bob, () => bob.lastSeq === alice.lastSeq, "sequences level");
  const now = 1_000_000;
  assert.equal(
    canonical(project(alice.view, "auditor", now)),
    canonical(project(bob.view, "auditor", now)),
  );
  assert.equal(alice.lastSeq, bob.lastSeq);

  // a public client renders no enabled mutation control
  const vm = bob.viewModel();
  assert.equal(vm.myRole.kind, "public");
  const controls = vm.controls;
  for (const [name, enabled] of Object.entries(controls)) {
    if (name === "canJoin") continue; // stepping in is navigation, not mutation
    assert.equal(enabled, false, `${name} must be disabled for public`);
  }

  // server-authoritative rollback: bob bypasses the disabled controls
  bob.send("post_note", { table: 0, text: "sneaky", area: "unsorted" });
  await waitFor(bob, () => bob.notices.some((n) => n.includes("UNAUTHORIZED")), "rejection notice");
  assert.equal(bob.pending.length, 0); // optimistic state rolled back
  assert.equal(
    [...bob.view.tables[0]!.notes.values()].filter((n) => n.text === "sneaky").length,
    0,
  );

  alice.close();
  bob.close();
});

test("reconnect resumes from the last seq without gaps", async () => {
  const carol = new SessionClient({
    baseUrl: `ws://127.0.0.1:${PORT}`,
    session: SESSION,
    token: "carol",
    actor: "carol",
    socketFactory,
    reconnectDelayMs: 50,
  });
  carol.connect();
  await waitFor(carol, () => carol.connection === "live" && carol.lastSeq >= 5, "carol live");
  const seqBefore = carol.lastSeq;
  // drop the underlying socket; the client must resync from lastSeq
  (carol as any).socket.close();
  await waitFor(carol, () => carol.connection === "live", "carol resynced", 5000);
  assert.ok(carol.lastSeq >= seqBefore);
  // new traffic still arrives in order
  await rest(
    `/sessions/${SESSION}/commands`,
    { type: "post_chat", payload: { table: 0, text: "after reconnect" } },
    "chair0",
  );
  await waitFor(
    carol,
    () => carol.view.tables[0]!.chat.some((m) => m.text === "after reconnect"),
    "chat after resume",
  );
  carol.close();
});
