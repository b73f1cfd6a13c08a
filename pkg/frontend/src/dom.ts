/**
 * DOM rendering: ViewModel in, DOM out. Controls the permission matrix
 * denies are rendered disabled; post-its drag between areas via HTML5 DnD.
 */

import type { CommandType } from "./protocol.js";
import type { NoteVM, TableVM, ViewModel } from "./viewmodel.js";

export interface Actions {
  send(type: CommandType, payload: Record<string, unknown>): void;
}

export function render(root: HTMLElement, vm: ViewModel, actions: Actions): void {
  root.textContent = "";
  root.appendChild(header(vm, actions));
  const main = el("div", "layout");
  const tables = el("div", "tables");
  for (const table of vm.tables) {
    tables.appendChild(renderTable(table, vm, actions));
  }
  main.appendChild(tables);
  main.appendChild(renderWall(vm));
  root.appendChild(main);
  root.appendChild(renderNotices(vm));
}

function header(vm: ViewModel, actions: Actions): HTMLElement {
  const bar = el("header", "topbar");
  bar.appendChild(el("h1", "title", vm.title || vm.sessionId));
  bar.appendChild(el("span", `conn conn-${vm.connection}`, vm.connection));
  bar.appendChild(el("span", "role", `${vm.me} (${vm.myRole.kind})`));
  if (vm.rotationCountdownMs !== null) {
    const seconds = Math.ceil(vm.rotationCountdownMs / 1000);
    const mm = String(Math.floor(seconds / 60)).padStart(2, "0");
    const ss = String(seconds % 60).padStart(2, "0");
    bar.appendChild(el("span", "countdown", `rotation in ${mm}:${ss}`));
  }
  bar.appendChild(
    button("Rotate now", vm.controls.canRotate, () => actions.send("rotate", { forced: true })),
  );
  bar.appendChild(
    button("Archive", vm.controls.canArchive, () => actions.send("archive_session", {})),
  );
  bar.appendChild(
    button("Spectate", vm.controls.canSwitchToPublic, () =>
      actions.send("switch_to_public", {}),
    ),
  );
  return bar;
}

function renderTable(table: TableVM, vm: ViewModel, actions: Actions): HTMLElement {
  const section = el("section", `table phase-${table.phase}`);
  const head = el("div", "table-head");
  head.appendChild(el("h2", "", `Table ${table.id} · ${table.phase} · round ${table.round}`));
  if (table.chair) head.appendChild(el("span", "chair", `chair: ${table.chair}`));
  if (table.conferenceUrl) {
    const link = el("a", "conference", "join conference") as HTMLAnchorElement;
    link.href = table.conferenceUrl;
    link.target = "_blank";
    head.appendChild(link);
  }
  const mine = vm.myRole.table === table.id;
  head.appendChild(
    button("Join", vm.controls.canJoin && table.phase === "open", () =>
      actions.send("join_table", { table: table.id }),
    ),
  );
  head.appendChild(
    button("Open", vm.controls.canOpenTable && (mine || vm.myRole.kind === "organizer"), () =>
      actions.send("open_table", {
        table: table.id,
        external_url: table.conferenceUrl ?? `https://conference/${vm.sessionId}/${table.id}`,
      }),
    ),
  );
  head.appendChild(
    button("Close", vm.controls.canCloseTable && (mine || vm.myRole.kind === "organizer"), () =>
      actions.send("close_table", { table: table.id }),
    ),
  );
  head.appendChild(
    button("Raise hand", vm.controls.canRequestTurn && mine, () =>
      actions.send("request_turn", { table: table.id }),
    ),
  );
  section.appendChild(head);

  if (table.turnQueue.length) {
    const queue = el("div", "turn-queue", `speaking queue: ${table.turnQueue.join(", ")}`);
    if (table.myQueuePosition !== null) {
      queue.appendChild(el("strong", "", ` (you are #${table.myQueuePosition})`));
    }
    for (const user of table.turnQueue) {
      queue.appendChild(
        button(`grant ${user}`, vm.controls.canGrantTurn && mine, () =>
          actions.send("grant_turn", { table: table.id, user }),
        ),
      );
    }
    section.appendChild(queue);
  }

  if (table.visibility === "summary") {
    section.appendChild(el("p", "summary", `${table.noteCount} notes (join to see the board)`));
    return section;
  }

  const rooms = el("div", "areas");
  for (const area of table.areas) {
    const zone = el("div", "area");
    zone.appendChild(el("h3", "", area.name));
    zone.dataset.area = area.name;
    zone.addEventListener("dragover", (e) => e.preventDefault());
    zone.addEventListener("drop", (e) => {
      e.preventDefault();
      const noteId = (e as DragEvent).dataTransfer?.getData("text/note-id");
      if (noteId && vm.controls.canMoveNote) {
        actions.send("move_note", { table: table.id, note_id: noteId, to_area: area.name });
      }
    });
    for (const note of area.notes) {
      zone.appendChild(renderNote(note, table.id, vm, actions));
    }
    rooms.appendChild(zone);
  }
  section.appendChild(rooms);

  if (vm.controls.canPostNote && mine) {
    const form = el("div", "compose");
    const input = el("input", "note-input") as HTMLInputElement;
    input.placeholder = "write a post-it";
    input.maxLength = 500;
    form.appendChild(input);
    form.appendChild(
      button("Post", true, () => {
        if (input.value.trim()) {
          actions.send("post_note", { table: table.id, text: input.value, area: "unsorted" });
          input.value = "";
        }
      }),
    );
    section.appendChild(form);
  }

  const chat = el("div", "chat");
  for (const message of table.chat.slice(-30)) {
    chat.appendChild(
      el(
        "p",
        `chat-message recency-${message.recency}`,
        `${message.author}: ${message.text}${message.emoticon ? " " + message.emoticon : ""}`,
      ),
    );
  }
  if (vm.controls.canChat && mine) {
    const input = el("input", "chat-input") as HTMLInputElement;
    input.placeholder = "say something";
    chat.appendChild(input);
    for (const emoticon of vm.emoticons) {
      chat.appendChild(
        button(emoticon, true, () =>
          actions.send("post_chat", { table: table.id, text: input.value, emoticon }),
        ),
      );
    }
    chat.appendChild(
      button("Send", true, () => {
        if (input.value.trim()) {
          actions.send("post_chat", { table: table.id, text: input.value });
          input.value = "";
        }
      }),
    );
  }
  section.appendChild(chat);
  return section;
}

function renderNote(
  note: NoteVM,
  tableId: number,
  vm: ViewModel,
  actions: Actions,
): HTMLElement {
  const card = el(
    "div",
    `note recency-${note.recency}${note.pending ? " pending" : ""}`,
  );
  card.appendChild(el("p", "note-text", note.text));
  card.appendChild(el("span", "note-author", note.author));
  card.draggable = vm.controls.canMoveNote;
  card.addEventListener("dragstart", (e) => {
    (e as DragEvent).dataTransfer?.setData("text/note-id", note.id);
  });
  if (vm.controls.canPromoteNote && !note.pending) {
    card.appendChild(
      button("to wall", true, () =>
        actions.send("promote_note", { table: tableId, note_id: note.id }),
      ),
    );
  }
  return card;
}

function renderWall(vm: ViewModel): HTMLElement {
  const wall = el("aside", "wall");
  wall.appendChild(el("h2", "", "Wall"));
  for (const entry of vm.wall) {
    const card = el("div", "wall-note");
    card.appendChild(el("p", "", entry.text));
    card.appendChild(el("span", "note-author", `promoted by ${entry.promotedBy}`));
    wall.appendChild(card);
  }
  return wall;
}

function renderNotices(vm: ViewModel): HTMLElement {
  const box = el("div", "notices");
  for (const notice of vm.notices.slice(-5)) {
    box.appendChild(el("p", "notice", notice));
  }
  return box;
}

function button(label: string, enabled: boolean, onClick: () => void): HTMLButtonElement {
  const node = el("button", "action") as HTMLButtonElement;
  node.textContent = label;
  node.disabled = !enabled;
  if (enabled) node.addEventListener("click", onClick);
  return node;
}

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}
