"""Commands: the requests that, when accepted, produce events.

Each command names its wire ``KIND`` and, where relevant, the table it
targets, so the permission check stays a pure function of (role, command).
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from scicafe.core.model import LOCAL, PrivacyLevel, UNSORTED_AREA


@dataclass(frozen=True)
class Command:
    KIND = ""


@dataclass(frozen=True)
class AssignChair(Command):
    KIND = "assign_chair"
    table: int
    user: str


@dataclass(frozen=True)
class OpenTable(Command):
    KIND = "open_table"
    table: int
    external_url: str
    audience: PrivacyLevel | None = None


@dataclass(frozen=True)
class SetAudience(Command):
    KIND = "set_audience"
    table: int
    audience: PrivacyLevel


@dataclass(frozen=True)
class CloseTable(Command):
    KIND = "close_table"
    table: int


@dataclass(frozen=True)
class JoinTable(Command):
    """Join a table as participant; table=None rejoins the caller's cohort."""

    KIND = "join_table"
    table: int | None = None


@dataclass(frozen=True)
class SwitchToPublic(Command):
    KIND = "switch_to_public"


@dataclass(frozen=True)
class PostNote(Command):
    KIND = "post_note"
    table: int
    text: str
    area: str = UNSORTED_AREA


@dataclass(frozen=True)
class MoveNote(Command):
    KIND = "move_note"
    table: int
    note_id: str
    to_area: str


@dataclass(frozen=True)
class PostChat(Command):
    KIND = "post_chat"
    table: int
    text: str
    emoticon: str | None = None
    origin: str = LOCAL


@dataclass(frozen=True)
class RequestTurn(Command):
    KIND = "request_turn"
    table: int


@dataclass(frozen=True)
class GrantTurn(Command):
    KIND = "grant_turn"
    table: int
    user: str


@dataclass(frozen=True)
class PromoteNote(Command):
    KIND = "promote_note"
    table: int
    note_id: str


@dataclass(frozen=True)
class Rotate(Command):
    KIND = "rotate"
    forced: bool = False


@dataclass(frozen=True)
class ArchiveSession(Command):
    KIND = "archive_session"


COMMAND_TYPES: dict[str, type[Command]] = {
    cls.KIND: cls
    for cls in (
        AssignChair,
        OpenTable,
        SetAudience,
        CloseTable,
        JoinTable,
        SwitchToPublic,
        PostNote,
        MoveNote,
        PostChat,
        RequestTurn,
        GrantTurn,
        PromoteNote,
        Rotate,
        ArchiveSession,
    )
}


def command_from_payload(kind: str, payload: dict) -> Command:
    """Build a command from a wire payload dict.

    Raises KeyError for an unknown kind and TypeError/ValueError for a
    payload that does not fit the command's fields; callers translate.
    """
    cls = COMMAND_TYPES[kind]
    known = {f.name for f in fields(cls)}
    kwargs = {}
    for name, value in payload.items():
        if name not in known:
            continue  # unknown fields ignored per wire contract
        if name == "audience" and value is not None:
            value = privacy_from_payload(value)
        kwargs[name] = value
    return cls(**kwargs)


def privacy_from_payload(value) -> PrivacyLevel:
    if isinstance(value, PrivacyLevel):
        return value
    if not isinstance(value, dict) or "kind" not in value:
        raise ValueError("privacy must be an object with a 'kind'")
    if value["kind"] == "public":
        return PrivacyLevel.public()
    return PrivacyLevel.restricted(value.get("group", ()))
