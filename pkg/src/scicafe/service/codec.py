"""Canonical JSON serialization for events, states, archives and Delphi
processes.

`dumps_line` is deterministic (sorted keys, compact separators, no
newlines), so equal values always serialize to identical bytes; snapshot
comparison and the write-ahead log rely on that.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from scicafe.core.errors import CorruptEvent
from scicafe.core.events import EVENT_KINDS, Event
from scicafe.core.model import (
    Blackboard,
    ChatMessage,
    ConferenceHandle,
    MoveRecord,
    PostIt,
    PrivacyLevel,
    Role,
    SessionArchive,
    SessionConfig,
    SessionState,
    TableArchive,
    TableState,
    WallEntry,
)
from scicafe.delphi.model import (
    DelphiProcess,
    Feedback,
    OfflineStep,
    Panelist,
    Response,
    Round,
    RoundStep,
    Statement,
    StatementStats,
)


def dumps_line(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# --- events ---


def event_to_dict(event: Event) -> dict:
    return {
        "seq": event.seq,
        "at": event.at,
        "actor": event.actor,
        "kind": event.kind,
        "payload": event.payload,
    }


def event_from_dict(data: dict) -> Event:
    try:
        event = Event(
            seq=data["seq"],
            at=data["at"],
            actor=data["actor"],
            kind=data["kind"],
            payload=data["payload"],
        )
    except (KeyError, TypeError) as exc:
        raise CorruptEvent(f"bad event record: {exc}") from exc
    if not isinstance(event.seq, int) or event.kind not in EVENT_KINDS:
        raise CorruptEvent(f"bad event record: seq={data.get('seq')!r} kind={data.get('kind')!r}")
    return event


# --- privacy / roles ---


def privacy_to_dict(privacy: PrivacyLevel) -> dict:
    if privacy.kind == "public":
        return {"kind": "public"}
    return {"kind": "restricted", "group": sorted(privacy.group)}


def privacy_from_dict(data: dict) -> PrivacyLevel:
    if data["kind"] == "public":
        return PrivacyLevel.public()
    return PrivacyLevel.restricted(data["group"])


def role_to_dict(role: Role) -> dict:
    return {"kind": role.kind, "table": role.table}


# --- session state ---


def state_to_dict(state: SessionState) -> dict:
    return {
        "session_id": state.session_id,
        "organizer": state.organizer,
        "config": {
            "title": state.config.title,
            "table_count": state.config.table_count,
            "rotation_minutes": state.config.rotation_minutes,
            "areas": list(state.config.areas),
            "privacy": privacy_to_dict(state.config.privacy),
            "recency_threshold_seconds": state.config.recency_threshold_seconds,
            "emoticons": list(state.config.emoticons),
        },
        "roles": {user: role_to_dict(role) for user, role in state.roles.items()},
        "tables": [_table_to_dict(t) for t in state.tables],
        "wall": [
            {"note_id": w.note_id, "promoted_by": w.promoted_by, "at": w.at}
            for w in state.wall
        ],
        "parked": dict(state.parked),
        "archived": state.archived,
        "archived_at": state.archived_at,
        "created_at": state.created_at,
        "last_seq": state.last_seq,
        "note_counter": state.note_counter,
        "chat_counter": state.chat_counter,
    }


def state_from_dict(data: dict) -> SessionState:
    config = SessionConfig(
        title=data["config"]["title"],
        table_count=data["config"]["table_count"],
        rotation_minutes=data["config"]["rotation_minutes"],
        areas=tuple(data["config"]["areas"]),
        privacy=privacy_from_dict(data["config"]["privacy"]),
        recency_threshold_seconds=data["config"]["recency_threshold_seconds"],
        emoticons=tuple(data["config"]["emoticons"]),
    )
    return SessionState(
        session_id=data["session_id"],
        config=config,
        organizer=data["organizer"],
        roles={
            user: Role(kind=r["kind"], table=r["table"])
            for user, r in data["roles"].items()
        },
        tables=tuple(_table_from_dict(t, config) for t in data["tables"]),
        wall=tuple(
            WallEntry(note_id=w["note_id"], promoted_by=w["promoted_by"], at=w["at"])
            for w in data["wall"]
        ),
        parked=dict(data["parked"]),
        archived=data["archived"],
        archived_at=data["archived_at"],
        created_at=data["created_at"],
        last_seq=data["last_seq"],
        note_counter=data["note_counter"],
        chat_counter=data["chat_counter"],
    )


def _table_to_dict(table: TableState) -> dict:
    conference = None
    if table.conference is not None:
        conference = {
            "external_url": table.conference.external_url,
            "audience": privacy_to_dict(table.conference.audience),
        }
    return {
        "id": table.id,
        "phase": table.phase,
        "chair": table.chair,
        "conference": conference,
        "blackboard": {
            "areas": list(table.blackboard.areas),
            "notes": {note_id: _note_to_dict(n) for note_id, n in table.blackboard.notes.items()},
        },
        "chat": [_chat_to_dict(m) for m in table.chat],
        "turn_queue": list(table.turn_queue),
        "round": table.round,
    }


def _table_from_dict(data: dict, config: SessionConfig) -> TableState:
    conference = None
    if data["conference"] is not None:
        conference = ConferenceHandle(
            external_url=data["conference"]["external_url"],
            audience=privacy_from_dict(data["conference"]["audience"]),
        )
    return TableState(
        id=data["id"],
        phase=data["phase"],
        chair=data["chair"],
        conference=conference,
        blackboard=Blackboard(
            areas=tuple(data["blackboard"]["areas"]),
            notes={
                note_id: _note_from_dict(n)
                for note_id, n in data["blackboard"]["notes"].items()
            },
        ),
        chat=tuple(_chat_from_dict(m) for m in data["chat"]),
        turn_queue=tuple(data["turn_queue"]),
        round=data["round"],
    )


def _note_to_dict(note: PostIt) -> dict:
    return {
        "id": note.id,
        "author": note.author,
        "text": note.text,
        "area": note.area,
        "created_at": note.created_at,
        "moved_history": [
            {"at": m.at, "from": m.from_area, "to": m.to_area, "actor": m.actor}
            for m in note.moved_history
        ],
    }


def _note_from_dict(data: dict) -> PostIt:
    return PostIt(
        id=data["id"],
        author=data["author"],
        text=data["text"],
        area=data["area"],
        created_at=data["created_at"],
        moved_history=tuple(
            MoveRecord(at=m["at"], from_area=m["from"], to_area=m["to"], actor=m["actor"])
            for m in data["moved_history"]
        ),
    )


def _chat_to_dict(message: ChatMessage) -> dict:
    return {
        "id": message.id,
        "author": message.author,
        "text": message.text,
        "emoticon": message.emoticon,
        "at": message.at,
        "origin": message.origin,
    }


def _chat_from_dict(data: dict) -> ChatMessage:
    return ChatMessage(
        id=data["id"],
        author=data["author"],
        text=data["text"],
        emoticon=data["emoticon"],
        at=data["at"],
        origin=data["origin"],
    )


def archive_to_dict(archive: SessionArchive) -> dict:
    return {
        "task_title": archive.task_title,
        "closed_at": archive.closed_at,
        "tables": [
            {
                "table_id": t.table_id,
                "rounds": t.rounds,
                "conference_url": t.conference_url,
                "areas": list(t.areas),
                "notes": [_note_to_dict(n) for n in t.notes],
                "chat": [_chat_to_dict(m) for m in t.chat],
            }
            for t in archive.tables
        ],
        "wall": [
            {"note_id": w.note_id, "promoted_by": w.promoted_by, "at": w.at}
            for w in archive.wall
        ],
    }


# --- delphi processes ---


def fraction_to_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def fraction_from_str(text: str) -> Fraction:
    numerator, denominator = text.split("/")
    return Fraction(int(numerator), int(denominator))


def stats_to_dict(stats: StatementStats) -> dict:
    return {
        "n": stats.n,
        "median": fraction_to_str(stats.median),
        "q1": fraction_to_str(stats.q1),
        "q3": fraction_to_str(stats.q3),
        "iqr": fraction_to_str(stats.iqr),
        "agreement_ratio": fraction_to_str(stats.agreement_ratio),
        "verdict": stats.verdict,
    }


def stats_from_dict(data: dict) -> StatementStats:
    return StatementStats(
        n=data["n"],
        median=fraction_from_str(data["median"]),
        q1=fraction_from_str(data["q1"]),
        q3=fraction_from_str(data["q3"]),
        iqr=fraction_from_str(data["iqr"]),
        agreement_ratio=fraction_from_str(data["agreement_ratio"]),
        verdict=data["verdict"],
    )


def process_to_dict(process: DelphiProcess) -> dict:
    steps = []
    for step in process.steps:
        if isinstance(step, OfflineStep):
            steps.append(
                {"type": "offline", "description": step.description, "completed_at": step.completed_at}
            )
        else:
            steps.append(
                {
                    "type": "round",
                    "round": _round_to_dict(step.round),
                    "stats": {
                        sid: stats_to_dict(s) for sid, s in (step.stats or {}).items()
                    }
                    if step.stats is not None
                    else None,
                }
            )
    return {
        "id": process.id,
        "title": process.title,
        "panel": [{"id": p.id, "category": p.category} for p in process.panel],
        "steps": steps,
        "complete": process.complete,
    }


def process_from_dict(data: dict) -> DelphiProcess:
    steps: list = []
    for step in data["steps"]:
        if step["type"] == "offline":
            steps.append(
                OfflineStep(description=step["description"], completed_at=step["completed_at"])
            )
        else:
            stats = step["stats"]
            steps.append(
                RoundStep(
                    round=_round_from_dict(step["round"]),
                    stats={sid: stats_from_dict(s) for sid, s in stats.items()}
                    if stats is not None
                    else None,
                )
            )
    return DelphiProcess(
        id=data["id"],
        title=data["title"],
        panel=tuple(Panelist(id=p["id"], category=p["category"]) for p in data["panel"]),
        steps=tuple(steps),
        complete=data["complete"],
    )


def _round_to_dict(round_: Round) -> dict:
    return {
        "id": round_.id,
        "statements": [_statement_to_dict(s) for s in round_.statements],
        "panel": [{"id": p.id, "category": p.category} for p in round_.panel],
        "scale_max": round_.scale_max,
        "responses": [
            {
                "panelist": panelist,
                "statement": statement,
                "rating": r.rating,
                "comment": r.comment,
                "revision": r.revision,
            }
            for (panelist, statement), r in sorted(round_.responses.items())
        ],
        "status": round_.status,
    }


def _round_from_dict(data: dict) -> Round:
    return Round(
        id=data["id"],
        statements=tuple(_statement_from_dict(s) for s in data["statements"]),
        panel=tuple(Panelist(id=p["id"], category=p["category"]) for p in data["panel"]),
        scale_max=data["scale_max"],
        responses={
            (r["panelist"], r["statement"]): Response(
                rating=r["rating"], comment=r["comment"], revision=r["revision"]
            )
            for r in data["responses"]
        },
        status=data["status"],
    )


def _statement_to_dict(statement: Statement) -> dict:
    feedback = None
    if statement.feedback is not None:
        feedback = {
            "stats": stats_to_dict(statement.feedback.stats),
            "comments": list(statement.feedback.comments),
        }
    return {"id": statement.id, "text": statement.text, "feedback": feedback}


def _statement_from_dict(data: dict) -> Statement:
    feedback = None
    if data["feedback"] is not None:
        feedback = Feedback(
            stats=stats_from_dict(data["feedback"]["stats"]),
            comments=tuple(data["feedback"]["comments"]),
        )
    return Statement(id=data["id"], text=data["text"], feedback=feedback)
