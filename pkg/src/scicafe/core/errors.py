"""Errors raised by the session state machine."""

from __future__ import annotations

from scicafe.errors import DomainError


class InvalidConfig(DomainError):
    code = "INVALID_CONFIG"


class Unauthorized(DomainError):
    code = "UNAUTHORIZED"


class UnknownTable(DomainError):
    code = "UNKNOWN_TABLE"


class TableNotOpen(DomainError):
    """The table exists but its phase does not admit the command."""

    code = "TABLE_NOT_OPEN"


class UnknownNote(DomainError):
    code = "UNKNOWN_NOTE"


class SessionArchivedError(DomainError):
    """The session reached its terminal state; no further commands."""

    code = "SESSION_ARCHIVED"


class InvariantViolation(DomainError):
    code = "INVARIANT_VIOLATION"


class NoOpenTables(DomainError):
    code = "NO_OPEN_TABLES"


class TablesStillOpen(DomainError):
    code = "TABLES_STILL_OPEN"


class ClockSkew(DomainError):
    code = "CLOCK_SKEW"


class ReplayError(DomainError):
    code = "REPLAY_ERROR"


class GapInSequence(ReplayError):
    code = "GAP_IN_SEQUENCE"


class CorruptEvent(ReplayError):
    code = "CORRUPT_EVENT"
