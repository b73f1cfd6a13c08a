"""The session state machine: commands in, events out, state by fold.

Contract:
  - apply() is deterministic: identical (state, command, actor, now) yields
    identical events, and the returned state equals folding those events.
  - replay() of any emitted log reproduces the live state field for field.
  - All mutation flows through events; this module performs no I/O.

Serialization of commands/events lives in the service layer; permission
policy lives in authorize() below and is total over (role, command).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from scicafe.core import events as ev
from scicafe.core.commands import (
    ArchiveSession,
    AssignChair,
    CloseTable,
    Command,
    GrantTurn,
    JoinTable,
    MoveNote,
    OpenTable,
    PostChat,
    PostNote,
    PromoteNote,
    RequestTurn,
    Rotate,
    SetAudience,
    SwitchToPublic,
)
from scicafe.core.errors import (
    ClockSkew,
    CorruptEvent,
    GapInSequence,
    InvariantViolation,
    NoOpenTables,
    ReplayError,
    SessionArchivedError,
    TableNotOpen,
    TablesStillOpen,
    Unauthorized,
    UnknownNote,
    UnknownTable,
)
from scicafe.core.model import (
    Blackboard,
    CHAIR,
    ChatMessage,
    ConferenceHandle,
    IDLE,
    LOCAL,
    MAX_NOTE_CHARS,
    MoveRecord,
    OPEN,
    CLOSED,
    ORGANIZER,
    PARTICIPANT,
    PUBLIC,
    PostIt,
    PrivacyLevel,
    REMOTE,
    Role,
    SYSTEM_ACTOR,
    SessionArchive,
    SessionConfig,
    SessionState,
    TableArchive,
    TableState,
    WallEntry,
)

RECENT = "recent"
OLD = "old"


@dataclass(frozen=True)
class Decision:
    allowed: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.allowed


ALLOW = Decision(True)


def _deny(reason: str) -> Decision:
    return Decision(False, reason)


# Matrix: organizer may issue every command; a chair manages their own table;
# a participant contributes at their own table and may step back to public;
# public users are read-only spectators except for (re)joining a table.
_CHAIR_COMMANDS = frozenset(
    {"open_table", "set_audience", "close_table", "grant_turn", "promote_note",
     "post_note", "move_note", "post_chat"}
)
_PARTICIPANT_COMMANDS = frozenset({"post_note", "move_note", "post_chat", "request_turn"})


def authorize(role: Role, command: Command) -> Decision:
    """Pure permission check; total over every (role, command) pair."""
    kind = command.KIND
    if role.kind == ORGANIZER:
        return ALLOW
    if role.kind == CHAIR:
        if kind in _CHAIR_COMMANDS:
            if getattr(command, "table", None) == role.table:
                return ALLOW
            return _deny("chair of a different table")
        return _deny(f"chairs may not {kind}")
    if role.kind == PARTICIPANT:
        if kind in _PARTICIPANT_COMMANDS:
            if getattr(command, "table", None) == role.table:
                return ALLOW
            return _deny("seated at a different table")
        if kind == "switch_to_public":
            return ALLOW
        return _deny(f"participants may not {kind}")
    # public / not yet seated
    if kind == "join_table":
        return ALLOW
    return _deny("spectator")


def create_session(
    config: SessionConfig, organizer: str, session_id: str, now: int
) -> tuple[SessionState, ev.Event]:
    """Start a session: table_count idle tables, empty boards, seq-1 event."""
    if organizer == SYSTEM_ACTOR:
        raise InvariantViolation("organizer id is reserved")
    created = ev.Event(
        seq=1,
        at=now,
        actor=organizer,
        kind=ev.SESSION_CREATED,
        payload={
            "session_id": session_id,
            "organizer": organizer,
            "title": config.title,
            "table_count": config.table_count,
            "rotation_minutes": config.rotation_minutes,
            "areas": list(config.areas),
            "privacy": _privacy_payload(config.privacy),
            "recency_threshold_seconds": config.recency_threshold_seconds,
            "emoticons": list(config.emoticons),
        },
    )
    return fold(None, created), created


def apply(
    state: SessionState, command: Command, actor: str, now: int
) -> tuple[SessionState, list[ev.Event]]:
    """Validate a command against state and emit the resulting events.

    The returned state is exactly ``fold`` of the returned events over the
    input state; callers that persist events and re-fold get the same value.
    """
    if state.archived:
        raise SessionArchivedError("session is archived")
    if actor == SYSTEM_ACTOR:
        if not isinstance(command, Rotate):
            raise Unauthorized("system actor may only rotate")
    else:
        decision = authorize(state.role_of(actor), command)
        if not decision:
            raise Unauthorized(decision.reason or "denied")

    payload = _validate(state, command, actor)
    kind = payload.pop("_kind", None) or _EVENT_KIND_FOR[command.KIND]
    event = ev.Event(
        seq=state.last_seq + 1,
        at=now,
        actor=actor,
        kind=kind,
        payload=payload,
    )
    return fold(state, event), [event]


def rotate(state: SessionState, now: int, forced: bool = False, actor: str = SYSTEM_ACTOR):
    """Cycle participants round-robin across the open tables."""
    return apply(state, Rotate(forced=forced), actor, now)


def archive_session(
    state: SessionState, now: int, actor: str | None = None
) -> tuple[SessionArchive, ev.Event]:
    """Close out the session into a task-shaped archive named by its title."""
    new_state, emitted = apply(state, ArchiveSession(), actor or state.organizer, now)
    return build_archive(new_state), emitted[0]


def build_archive(state: SessionState) -> SessionArchive:
    if not state.archived:
        raise InvariantViolation("session is not archived")
    tables = tuple(
        TableArchive(
            table_id=t.id,
            rounds=t.round,
            conference_url=t.conference.external_url if t.conference else None,
            areas=t.blackboard.areas,
            notes=tuple(t.blackboard.notes[k] for k in sorted(t.blackboard.notes)),
            chat=t.chat,
        )
        for t in state.tables
    )
    return SessionArchive(
        task_title=state.config.title,
        closed_at=state.archived_at or 0,
        tables=tables,
        wall=state.wall,
    )


def recency_class(note: PostIt, now: int, threshold_seconds: int) -> str:
    """'recent' while the note's age is within the threshold (inclusive)."""
    if now < note.created_at:
        raise ClockSkew(f"now {now} precedes note creation {note.created_at}")
    return RECENT if (now - note.created_at) <= threshold_seconds * 1000 else OLD


# --- command validation -> event payloads ---

_EVENT_KIND_FOR = {
    "assign_chair": ev.CHAIR_ASSIGNED,
    "open_table": ev.TABLE_OPENED,
    "set_audience": ev.TABLE_OPENED,
    "close_table": ev.TABLE_CLOSED,
    "join_table": None,  # resolved to Joined or RoleChanged in _validate
    "switch_to_public": ev.ROLE_CHANGED,
    "post_note": ev.NOTE_POSTED,
    "move_note": ev.NOTE_MOVED,
    "post_chat": ev.CHAT_POSTED,
    "request_turn": ev.TURN_REQUESTED,
    "grant_turn": ev.TURN_GRANTED,
    "promote_note": ev.NOTE_PROMOTED,
    "rotate": ev.ROTATED,
    "archive_session": ev.SESSION_ARCHIVED,
}


def _require_table(state: SessionState, table_id, phase: str | None = None) -> TableState:
    if not isinstance(table_id, int):
        raise UnknownTable(f"table id {table_id!r}")
    table = state.table(table_id)
    if table is None:
        raise UnknownTable(f"no table {table_id}")
    if phase is not None and table.phase != phase:
        raise TableNotOpen(f"table {table_id} is {table.phase}, not {phase}")
    return table


def _validate(state: SessionState, command: Command, actor: str) -> dict:
    """Check command preconditions; return the event payload.

    Mutates nothing. join_table additionally rewrites the event kind via the
    payload marker consumed by apply() -- see _EVENT_KIND_FOR.
    """
    if isinstance(command, AssignChair):
        _require_table(state, command.table)
        if command.user == SYSTEM_ACTOR:
            raise InvariantViolation("reserved user id")
        if command.user == state.organizer:
            raise InvariantViolation("the organizer cannot chair a table")
        current = state.role_of(command.user)
        if current.kind == CHAIR and current.table != command.table:
            other = state.table(current.table)
            if other is not None and other.phase == OPEN:
                raise InvariantViolation(
                    f"user chairs open table {current.table}"
                )
        previous = state.tables[command.table].chair
        return {"table": command.table, "user": command.user, "previous": previous}

    if isinstance(command, OpenTable):
        table = _require_table(state, command.table)
        if table.chair is None:
            raise InvariantViolation(f"table {command.table} has no chair")
        if not command.external_url:
            raise InvariantViolation("conference url must be non-empty")
        audience = command.audience or state.config.privacy
        if not audience.narrows(state.config.privacy):
            raise InvariantViolation("audience may only narrow the session privacy")
        return {
            "table": command.table,
            "external_url": command.external_url,
            "audience": _privacy_payload(audience),
        }

    if isinstance(command, SetAudience):
        table = _require_table(state, command.table, OPEN)
        if not command.audience.narrows(state.config.privacy):
            raise InvariantViolation("audience may only narrow the session privacy")
        return {
            "table": command.table,
            "external_url": table.conference.external_url,
            "audience": _privacy_payload(command.audience),
        }

    if isinstance(command, CloseTable):
        _require_table(state, command.table, OPEN)
        return {"table": command.table}

    if isinstance(command, JoinTable):
        role = state.role_of(actor)
        if role.kind in (ORGANIZER, CHAIR, PARTICIPANT):
            raise InvariantViolation(f"{role.kind} is already seated")
        table_id = command.table
        if table_id is None:
            table_id = state.parked.get(actor)
            if table_id is None:
                raise InvariantViolation("no cohort table to rejoin; name a table")
        _require_table(state, table_id, OPEN)
        if actor in state.parked or actor in state.roles:
            return {"user": actor, "to": PARTICIPANT, "table": table_id, "_kind": ev.ROLE_CHANGED}
        return {"user": actor, "table": table_id, "_kind": ev.JOINED}

    if isinstance(command, SwitchToPublic):
        role = state.role_of(actor)
        if role.kind != PARTICIPANT:
            raise InvariantViolation("only participants can step back to public")
        return {"user": actor, "to": PUBLIC, "cohort": role.table}

    if isinstance(command, PostNote):
        table = _require_table(state, command.table, OPEN)
        text = command.text
        if not text or not text.strip():
            raise InvariantViolation("note text must be non-empty")
        if len(text) > MAX_NOTE_CHARS:
            raise InvariantViolation(f"note text exceeds {MAX_NOTE_CHARS} chars")
        if command.area not in table.blackboard.areas:
            raise InvariantViolation(f"no area {command.area!r} on table {command.table}")
        return {
            "table": command.table,
            "note_id": f"n{state.note_counter + 1}",
            "text": text,
            "area": command.area,
        }

    if isinstance(command, MoveNote):
        table = _require_table(state, command.table, OPEN)
        note = table.blackboard.notes.get(command.note_id)
        if note is None:
            raise UnknownNote(f"no note {command.note_id} on table {command.table}")
        if command.to_area not in table.blackboard.areas:
            raise InvariantViolation(f"no area {command.to_area!r} on table {command.table}")
        return {
            "table": command.table,
            "note_id": command.note_id,
            "from": note.area,
            "to": command.to_area,
        }

    if isinstance(command, PostChat):
        _require_table(state, command.table, OPEN)
        if command.origin not in (LOCAL, REMOTE):
            raise InvariantViolation(f"unknown chat origin {command.origin!r}")
        if command.emoticon is not None and command.emoticon not in state.config.emoticons:
            raise InvariantViolation(f"emoticon {command.emoticon!r} not in the palette")
        if (not command.text or not command.text.strip()) and command.emoticon is None:
            raise InvariantViolation("chat message needs text or an emoticon")
        return {
            "table": command.table,
            "message_id": f"m{state.chat_counter + 1}",
            "text": command.text,
            "emoticon": command.emoticon,
            "origin": command.origin,
        }

    if isinstance(command, RequestTurn):
        table = _require_table(state, command.table, OPEN)
        if actor in table.turn_queue:
            raise InvariantViolation("turn already requested")
        return {"table": command.table, "user": actor}

    if isinstance(command, GrantTurn):
        table = _require_table(state, command.table, OPEN)
        if command.user not in table.turn_queue:
            raise InvariantViolation(f"{command.user} has not requested a turn")
        return {"table": command.table, "user": command.user}

    if isinstance(command, PromoteNote):
        table = _require_table(state, command.table)
        note = table.blackboard.notes.get(command.note_id)
        if note is None:
            raise UnknownNote(f"no note {command.note_id} on table {command.table}")
        if any(entry.note_id == command.note_id for entry in state.wall):
            raise InvariantViolation(f"note {command.note_id} is already on the wall")
        return {"table": command.table, "note_id": command.note_id}

    if isinstance(command, Rotate):
        open_ids = state.open_table_ids()
        if not open_ids:
            raise NoOpenTables("no open tables to rotate")
        n = len(open_ids)
        moves = [[open_ids[i], open_ids[(i + 1) % n]] for i in range(n)]
        return {"moves": moves, "forced": command.forced}

    if isinstance(command, ArchiveSession):
        still_open = state.open_table_ids()
        if still_open:
            raise TablesStillOpen(f"tables still open: {still_open}")
        return {"title": state.config.title}

    raise InvariantViolation(f"unhandled command {command.KIND}")


# --- fold: the only place state is built ---


def fold(state: SessionState | None, event: ev.Event) -> SessionState:
    """Fold one event into state. Total for events produced by apply()."""
    if event.kind == ev.SESSION_CREATED:
        if state is not None:
            raise CorruptEvent("SessionCreated after event 1")
        return _fold_created(event)
    if state is None:
        raise ReplayError("log does not start with SessionCreated")

    p = event.payload
    if event.kind == ev.CHAIR_ASSIGNED:
        table_id, user = p["table"], p["user"]
        previous = state.tables[table_id].chair
        old_role = state.roles.get(user)
        if old_role is not None and old_role.kind == CHAIR and old_role.table != table_id:
            state = _patch_table(state, old_role.table, chair=None)
        roles = dict(state.roles)
        if previous is not None and previous != user:
            roles[previous] = Role.participant(table_id)
        roles[user] = Role.chair(table_id)
        state = replace(state, roles=roles)
        return _bump(_patch_table(state, table_id, chair=user), event)

    if event.kind == ev.TABLE_OPENED:
        conference = ConferenceHandle(
            external_url=p["external_url"], audience=_privacy_value(p["audience"])
        )
        return _bump(
            _patch_table(state, p["table"], phase=OPEN, conference=conference), event
        )

    if event.kind == ev.TABLE_CLOSED:
        return _bump(_patch_table(state, p["table"], phase=CLOSED), event)

    if event.kind == ev.JOINED:
        roles = dict(state.roles)
        roles[p["user"]] = Role.participant(p["table"])
        return _bump(replace(state, roles=roles), event)

    if event.kind == ev.ROLE_CHANGED:
        roles = dict(state.roles)
        parked = dict(state.parked)
        if p["to"] == PUBLIC:
            roles[p["user"]] = Role.public()
            parked[p["user"]] = p["cohort"]
            # stepping out forfeits any queued turn
            table = state.tables[p["cohort"]]
            if p["user"] in table.turn_queue:
                queue = tuple(u for u in table.turn_queue if u != p["user"])
                state = _patch_table(state, p["cohort"], turn_queue=queue)
        else:
            roles[p["user"]] = Role.participant(p["table"])
            parked.pop(p["user"], None)
        return _bump(replace(state, roles=roles, parked=parked), event)

    if event.kind == ev.NOTE_POSTED:
        table = state.tables[p["table"]]
        note = PostIt(
            id=p["note_id"],
            author=event.actor,
            text=p["text"],
            area=p["area"],
            created_at=event.at,
        )
        notes = dict(table.blackboard.notes)
        notes[note.id] = note
        board = replace(table.blackboard, notes=notes)
        state = _patch_table(state, p["table"], blackboard=board)
        return _bump(replace(state, note_counter=state.note_counter + 1), event)

    if event.kind == ev.NOTE_MOVED:
        table = state.tables[p["table"]]
        note = table.blackboard.notes[p["note_id"]]
        record = MoveRecord(at=event.at, from_area=p["from"], to_area=p["to"], actor=event.actor)
        moved = replace(note, area=p["to"], moved_history=note.moved_history + (record,))
        notes = dict(table.blackboard.notes)
        notes[moved.id] = moved
        board = replace(table.blackboard, notes=notes)
        return _bump(_patch_table(state, p["table"], blackboard=board), event)

    if event.kind == ev.CHAT_POSTED:
        table = state.tables[p["table"]]
        message = ChatMessage(
            id=p["message_id"],
            author=event.actor,
            text=p["text"],
            emoticon=p["emoticon"],
            at=event.at,
            origin=p["origin"],
        )
        state = _patch_table(state, p["table"], chat=table.chat + (message,))
        return _bump(replace(state, chat_counter=state.chat_counter + 1), event)

    if event.kind == ev.TURN_REQUESTED:
        table = state.tables[p["table"]]
        return _bump(
            _patch_table(state, p["table"], turn_queue=table.turn_queue + (p["user"],)),
            event,
        )

    if event.kind == ev.TURN_GRANTED:
        table = state.tables[p["table"]]
        queue = tuple(u for u in table.turn_queue if u != p["user"])
        return _bump(_patch_table(state, p["table"], turn_queue=queue), event)

    if event.kind == ev.NOTE_PROMOTED:
        entry = WallEntry(note_id=p["note_id"], promoted_by=event.actor, at=event.at)
        return _bump(replace(state, wall=state.wall + (entry,)), event)

    if event.kind == ev.ROTATED:
        moves = {src: dst for src, dst in p["moves"]}
        roles = {}
        for user, role in state.roles.items():
            if role.kind == PARTICIPANT and role.table in moves:
                roles[user] = Role.participant(moves[role.table])
            else:
                roles[user] = role
        parked = {
            user: moves.get(table, table) for user, table in state.parked.items()
        }
        tables = []
        for table in state.tables:
            if table.id in moves:
                tables.append(replace(table, round=table.round + 1, turn_queue=()))
            else:
                tables.append(table)
        return _bump(
            replace(state, roles=roles, parked=parked, tables=tuple(tables)), event
        )

    if event.kind == ev.SESSION_ARCHIVED:
        return _bump(replace(state, archived=True, archived_at=event.at), event)

    raise CorruptEvent(f"unknown event kind {event.kind!r}")


def replay(events) -> SessionState:
    """Rebuild state from an ordered event log; pure."""
    state: SessionState | None = None
    expected = 1
    for event in events:
        if not isinstance(event, ev.Event) or event.kind not in ev.EVENT_KINDS:
            raise CorruptEvent(f"not a session event: {event!r}")
        if event.seq != expected:
            raise GapInSequence(f"expected seq {expected}, got {event.seq}")
        if expected == 1 and event.kind != ev.SESSION_CREATED:
            raise ReplayError("log does not start with SessionCreated")
        if state is not None and state.archived:
            raise CorruptEvent(f"event {event.seq} after SessionArchived")
        state = fold(state, event)
        expected += 1
    if state is None:
        raise ReplayError("empty log: no SessionCreated")
    return state


def verify_permission_soundness(events) -> None:
    """Re-run authorize for every event against the state it was issued in.

    Raises Unauthorized on the first event whose actor lacked permission;
    used by replay-time audits and property tests.
    """
    state: SessionState | None = None
    for event in events:
        if event.kind != ev.SESSION_CREATED:
            if event.actor == SYSTEM_ACTOR:
                if event.kind != ev.ROTATED:
                    raise Unauthorized(f"system actor emitted {event.kind} at seq {event.seq}")
            else:
                command = _command_shape(event)
                decision = authorize(state.role_of(event.actor), command)
                if not decision:
                    raise Unauthorized(
                        f"seq {event.seq}: {event.actor} lacked permission for {event.kind}"
                    )
        state = fold(state, event)


def _command_shape(event: ev.Event) -> Command:
    """Reconstruct the command a logged event answers to, for authorization."""
    p = event.payload
    kind = event.kind
    if kind == ev.CHAIR_ASSIGNED:
        return AssignChair(table=p["table"], user=p["user"])
    if kind == ev.TABLE_OPENED:
        return OpenTable(table=p["table"], external_url=p["external_url"])
    if kind == ev.TABLE_CLOSED:
        return CloseTable(table=p["table"])
    if kind == ev.JOINED:
        return JoinTable(table=p["table"])
    if kind == ev.ROLE_CHANGED:
        if p["to"] == PUBLIC:
            return SwitchToPublic()
        return JoinTable(table=p["table"])
    if kind == ev.NOTE_POSTED:
        return PostNote(table=p["table"], text=p["text"], area=p["area"])
    if kind == ev.NOTE_MOVED:
        return MoveNote(table=p["table"], note_id=p["note_id"], to_area=p["to"])
    if kind == ev.CHAT_POSTED:
        return PostChat(table=p["table"], text=p["text"], emoticon=p["emoticon"], origin=p["origin"])
    if kind == ev.TURN_REQUESTED:
        return RequestTurn(table=p["table"])
    if kind == ev.TURN_GRANTED:
        return GrantTurn(table=p["table"], user=p["user"])
    if kind == ev.NOTE_PROMOTED:
        return PromoteNote(table=p["table"], note_id=p["note_id"])
    if kind == ev.ROTATED:
        return Rotate(forced=p["forced"])
    if kind == ev.SESSION_ARCHIVED:
        return ArchiveSession()
    raise CorruptEvent(f"unknown event kind {kind!r}")


def check_invariants(state: SessionState) -> None:
    """Assert the documented type invariants; raises InvariantViolation."""
    seen_notes: set[str] = set()
    for table in state.tables:
        if table.phase == OPEN and (table.chair is None or table.conference is None):
            raise InvariantViolation(f"open table {table.id} lacks chair or conference")
        if len(set(table.turn_queue)) != len(table.turn_queue):
            raise InvariantViolation(f"duplicate turn request on table {table.id}")
        if len(set(table.blackboard.areas)) != len(table.blackboard.areas):
            raise InvariantViolation(f"duplicate area names on table {table.id}")
        for note in table.blackboard.notes.values():
            if note.id in seen_notes:
                raise InvariantViolation(f"note id {note.id} duplicated across tables")
            seen_notes.add(note.id)
            if note.area not in table.blackboard.areas:
                raise InvariantViolation(f"note {note.id} sits in unknown area {note.area!r}")
            expected = note.moved_history[-1].to_area if note.moved_history else note.area
            if note.moved_history and note.area != expected:
                raise InvariantViolation(f"note {note.id} area diverges from its history")
            stamps = [m.at for m in note.moved_history]
            if stamps != sorted(stamps):
                raise InvariantViolation(f"note {note.id} history out of order")
    wall_ids = [entry.note_id for entry in state.wall]
    if len(set(wall_ids)) != len(wall_ids):
        raise InvariantViolation("duplicate note on the wall")
    for note_id in wall_ids:
        if state.find_note(note_id) is None:
            raise InvariantViolation(f"wall references missing note {note_id}")
    for user, role in state.roles.items():
        if role.table is not None and state.table(role.table) is None:
            raise InvariantViolation(f"{user} holds a role at missing table {role.table}")


# --- helpers ---


def _fold_created(event: ev.Event) -> SessionState:
    p = event.payload
    try:
        config = SessionConfig(
            title=p["title"],
            table_count=p["table_count"],
            rotation_minutes=p["rotation_minutes"],
            areas=tuple(p["areas"]),
            privacy=_privacy_value(p["privacy"]),
            recency_threshold_seconds=p["recency_threshold_seconds"],
            emoticons=tuple(p["emoticons"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptEvent(f"bad SessionCreated payload: {exc}") from exc
    tables = tuple(
        TableState(
            id=i,
            phase=IDLE,
            chair=None,
            conference=None,
            blackboard=Blackboard(areas=config.areas, notes={}),
            chat=(),
            turn_queue=(),
            round=0,
        )
        for i in range(config.table_count)
    )
    return SessionState(
        session_id=p["session_id"],
        config=config,
        organizer=p["organizer"],
        roles={p["organizer"]: Role.organizer()},
        tables=tables,
        wall=(),
        parked={},
        archived=False,
        archived_at=None,
        created_at=event.at,
        last_seq=1,
        note_counter=0,
        chat_counter=0,
    )


def _patch_table(state: SessionState, table_id: int, **changes) -> SessionState:
    tables = list(state.tables)
    tables[table_id] = replace(tables[table_id], **changes)
    return replace(state, tables=tuple(tables))


def _bump(state: SessionState, event: ev.Event) -> SessionState:
    return replace(state, last_seq=event.seq)


def _privacy_payload(privacy: PrivacyLevel) -> dict:
    if privacy.kind == "public":
        return {"kind": "public"}
    return {"kind": "restricted", "group": sorted(privacy.group)}


def _privacy_value(payload: dict) -> PrivacyLevel:
    if payload["kind"] == "public":
        return PrivacyLevel.public()
    return PrivacyLevel.restricted(payload["group"])
