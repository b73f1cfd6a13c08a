"""Parametric description of how a session went, computed off the event log."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scicafe.core import replay
from scicafe.core.errors import ReplayError
from scicafe.core.events import (
    CHAT_POSTED,
    NOTE_POSTED,
    ROTATED,
    SESSION_CREATED,
)
from scicafe.core.model import CHAIR, ORGANIZER, REMOTE
from scicafe.core import fold
from scicafe.knowledge.errors import CorruptLog


@dataclass(frozen=True)
class ParticipationSummary:
    session_id: str
    per_user_notes: dict[str, int]
    per_user_chats: dict[str, int]
    total_notes: int
    notes_per_area: dict[str, int]
    entropy_nats: float
    rotation_rounds: int
    distinct_contributors: int


@dataclass(frozen=True)
class ModerationAlert:
    message_id: str
    table: int
    origin: str
    waited_seconds: float
    raised_at: int


def session_metrics(events) -> ParticipationSummary:
    """Counts, per-area histogram, and participation entropy (nats)."""
    try:
        final = replay(list(events))
    except ReplayError as exc:
        raise CorruptLog(str(exc)) from exc

    notes: dict[str, int] = {}
    chats: dict[str, int] = {}
    rotations = 0
    for event in events:
        if event.kind == NOTE_POSTED:
            notes[event.actor] = notes.get(event.actor, 0) + 1
        elif event.kind == CHAT_POSTED:
            chats[event.actor] = chats.get(event.actor, 0) + 1
        elif event.kind == ROTATED:
            rotations += 1

    total = sum(notes.values())
    entropy = 0.0
    if total:
        for count in notes.values():
            share = count / total
            entropy -= share * math.log(share)
        entropy = max(entropy, 0.0)

    histogram: dict[str, int] = {}
    for table in final.tables:
        for note in table.blackboard.notes.values():
            histogram[note.area] = histogram.get(note.area, 0) + 1

    return ParticipationSummary(
        session_id=final.session_id,
        per_user_notes=notes,
        per_user_chats=chats,
        total_notes=total,
        notes_per_area=histogram,
        entropy_nats=entropy,
        rotation_rounds=rotations,
        distinct_contributors=len(set(notes) | set(chats)),
    )


def moderation_alerts(events, now: int, threshold_seconds: int) -> list[ModerationAlert]:
    """Remote chat messages a moderator left hanging past the threshold.

    A message counts as answered only by a later chat at the same table
    whose author was, at that moment, the table's chair or the organizer.
    Late answers still alert (with the actual wait); answers within the
    threshold suppress the alert.
    """
    if threshold_seconds <= 0:
        raise ValueError("threshold_seconds must be positive")
    threshold_ms = threshold_seconds * 1000

    state = None
    remote: list[dict] = []  # message_id, table, at, reply_at
    for event in events:
        if event.kind == SESSION_CREATED:
            state = fold(None, event)
            continue
        if event.kind == CHAT_POSTED:
            table = event.payload["table"]
            if event.payload["origin"] == REMOTE:
                remote.append(
                    {
                        "message_id": event.payload["message_id"],
                        "table": table,
                        "at": event.at,
                        "reply_at": None,
                    }
                )
            role = state.role_of(event.actor)
            is_moderator = role.kind == ORGANIZER or (
                role.kind == CHAIR and role.table == table
            )
            if is_moderator:
                for pending in remote:
                    if (
                        pending["table"] == table
                        and pending["reply_at"] is None
                        and event.at > pending["at"]
                    ):
                        pending["reply_at"] = event.at
        state = fold(state, event)

    alerts = []
    for message in remote:
        reply_at = message["reply_at"]
        if reply_at is not None and reply_at - message["at"] <= threshold_ms:
            continue
        waited_ms = (reply_at if reply_at is not None else now) - message["at"]
        if waited_ms < threshold_ms:
            continue
        alerts.append(
            ModerationAlert(
                message_id=message["message_id"],
                table=message["table"],
                origin=REMOTE,
                waited_seconds=waited_ms / 1000,
                raised_at=message["at"] + threshold_ms,
            )
        )
    alerts.sort(key=lambda a: (-a.waited_seconds, a.message_id))
    return alerts
