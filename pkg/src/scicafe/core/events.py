"""Event records: the append-only facts a session is folded from.

Payloads are plain JSON-compatible dicts (str keys; str/int/bool/list/dict
values) so an event survives a serialize/parse round trip unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

SESSION_CREATED = "SessionCreated"
CHAIR_ASSIGNED = "ChairAssigned"
TABLE_OPENED = "TableOpened"
JOINED = "Joined"
ROLE_CHANGED = "RoleChanged"
NOTE_POSTED = "NotePosted"
NOTE_MOVED = "NoteMoved"
CHAT_POSTED = "ChatPosted"
TURN_REQUESTED = "TurnRequested"
TURN_GRANTED = "TurnGranted"
NOTE_PROMOTED = "NotePromoted"
ROTATED = "Rotated"
TABLE_CLOSED = "TableClosed"
SESSION_ARCHIVED = "SessionArchived"

EVENT_KINDS = frozenset(
    {
        SESSION_CREATED,
        CHAIR_ASSIGNED,
        TABLE_OPENED,
        JOINED,
        ROLE_CHANGED,
        NOTE_POSTED,
        NOTE_MOVED,
        CHAT_POSTED,
        TURN_REQUESTED,
        TURN_GRANTED,
        NOTE_PROMOTED,
        ROTATED,
        TABLE_CLOSED,
        SESSION_ARCHIVED,
    }
)


@dataclass(frozen=True)
class Event:
    """One fact. ``seq`` is gapless per session, starting at 1."""

    seq: int
    at: int  # timestamp, ms
    actor: str  # user id or "system"
    kind: str
    payload: dict[str, Any]
