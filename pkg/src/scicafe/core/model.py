"""Domain values for one deliberation session.

Everything here is an immutable snapshot: the state machine (machine.py)
never mutates, it builds replacements. Snapshots are therefore safe to hand
to concurrent readers and to serialize at any point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from scicafe.core.errors import InvalidConfig

SYSTEM_ACTOR = "system"
UNSORTED_AREA = "unsorted"

IDLE = "idle"
OPEN = "open"
CLOSED = "closed"

LOCAL = "local"
REMOTE = "remote"

DEFAULT_ROTATION_MINUTES = 20
DEFAULT_RECENCY_SECONDS = 300
DEFAULT_EMOTICONS = (":)", ":(", ":D", "<3", "+1", "-1", "?!")
MAX_NOTE_CHARS = 500


@dataclass(frozen=True)
class PrivacyLevel:
    """Audience scope: open to everyone, or restricted to a named group."""

    kind: str  # "public" | "restricted"
    group: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.kind not in ("public", "restricted"):
            raise ValueError(f"unknown privacy kind {self.kind!r}")
        if self.kind == "restricted" and not self.group:
            raise ValueError("restricted privacy requires a non-empty group")
        if self.kind == "public" and self.group:
            raise ValueError("public privacy carries no group")

    @classmethod
    def public(cls) -> "PrivacyLevel":
        return cls("public")

    @classmethod
    def restricted(cls, group) -> "PrivacyLevel":
        return cls("restricted", frozenset(group))

    def narrows(self, outer: "PrivacyLevel") -> bool:
        """True when this audience is a subset of ``outer``."""
        if outer.kind == "public":
            return True
        return self.kind == "restricted" and self.group <= outer.group


@dataclass(frozen=True)
class SessionConfig:
    title: str
    table_count: int
    rotation_minutes: int = DEFAULT_ROTATION_MINUTES
    areas: tuple[str, ...] = (UNSORTED_AREA,)
    privacy: PrivacyLevel = PrivacyLevel.public()
    recency_threshold_seconds: int = DEFAULT_RECENCY_SECONDS
    emoticons: tuple[str, ...] = DEFAULT_EMOTICONS

    def __post_init__(self):
        if not self.title or not self.title.strip():
            raise InvalidConfig("title must be non-empty")
        if self.table_count < 1:
            raise InvalidConfig("table_count must be >= 1")
        if self.rotation_minutes < 1:
            raise InvalidConfig("rotation_minutes must be positive")
        if self.recency_threshold_seconds < 1:
            raise InvalidConfig("recency_threshold_seconds must be positive")
        if not self.areas:
            raise InvalidConfig("at least one blackboard area is required")
        if self.areas[0] != UNSORTED_AREA:
            raise InvalidConfig(f"first area must be {UNSORTED_AREA!r}")
        if len(set(self.areas)) != len(self.areas):
            raise InvalidConfig("area names must be unique")
        if not isinstance(self.privacy, PrivacyLevel):
            raise InvalidConfig("privacy must be a PrivacyLevel")


ORGANIZER = "organizer"
CHAIR = "chair"
PARTICIPANT = "participant"
PUBLIC = "public"


@dataclass(frozen=True)
class Role:
    """A user holds exactly one role per session at any instant."""

    kind: str
    table: int | None = None

    @classmethod
    def organizer(cls) -> "Role":
        return cls(ORGANIZER)

    @classmethod
    def chair(cls, table: int) -> "Role":
        return cls(CHAIR, table)

    @classmethod
    def participant(cls, table: int) -> "Role":
        return cls(PARTICIPANT, table)

    @classmethod
    def public(cls) -> "Role":
        return cls(PUBLIC)


@dataclass(frozen=True)
class ConferenceHandle:
    """Opaque pointer to the external conference; no media handling here."""

    external_url: str
    audience: PrivacyLevel


@dataclass(frozen=True)
class MoveRecord:
    at: int
    from_area: str
    to_area: str
    actor: str


@dataclass(frozen=True)
class PostIt:
    id: str
    author: str
    text: str
    area: str
    created_at: int
    moved_history: tuple[MoveRecord, ...] = ()


@dataclass(frozen=True)
class ChatMessage:
    id: str
    author: str
    text: str
    emoticon: str | None
    at: int
    origin: str  # "local" | "remote"


@dataclass(frozen=True)
class Blackboard:
    areas: tuple[str, ...]
    notes: Mapping[str, PostIt] = field(default_factory=dict)


@dataclass(frozen=True)
class TableState:
    id: int
    phase: str  # "idle" | "open" | "closed"
    chair: str | None
    conference: ConferenceHandle | None
    blackboard: Blackboard
    chat: tuple[ChatMessage, ...]
    turn_queue: tuple[str, ...]
    round: int


@dataclass(frozen=True)
class WallEntry:
    note_id: str
    promoted_by: str
    at: int


@dataclass(frozen=True)
class SessionState:
    """Materialized view of one session, equal to the fold of its event log."""

    session_id: str
    config: SessionConfig
    organizer: str
    roles: Mapping[str, Role]
    tables: tuple[TableState, ...]
    wall: tuple[WallEntry, ...]
    parked: Mapping[str, int]  # spectating users -> table their cohort occupies
    archived: bool
    archived_at: int | None
    created_at: int
    last_seq: int
    note_counter: int
    chat_counter: int

    def table(self, table_id: int) -> TableState | None:
        if 0 <= table_id < len(self.tables):
            return self.tables[table_id]
        return None

    def role_of(self, user: str) -> Role:
        return self.roles.get(user, Role.public())

    def find_note(self, note_id: str) -> tuple[int, PostIt] | None:
        for t in self.tables:
            note = t.blackboard.notes.get(note_id)
            if note is not None:
                return t.id, note
        return None

    def open_table_ids(self) -> list[int]:
        return [t.id for t in self.tables if t.phase == OPEN]


@dataclass(frozen=True)
class TableArchive:
    table_id: int
    rounds: int
    conference_url: str | None
    areas: tuple[str, ...]
    notes: tuple[PostIt, ...]
    chat: tuple[ChatMessage, ...]


@dataclass(frozen=True)
class SessionArchive:
    """Durable record of a finished session, filed under the session's title."""

    task_title: str
    closed_at: int
    tables: tuple[TableArchive, ...]
    wall: tuple[WallEntry, ...]
