"""Errors raised by the Delphi consensus engine."""

from __future__ import annotations

from scicafe.errors import DomainError


class StepOrderViolation(DomainError):
    code = "STEP_ORDER_VIOLATION"


class EmptyStatements(DomainError):
    code = "EMPTY_STATEMENTS"


class EmptyPanel(DomainError):
    code = "EMPTY_PANEL"


class RoundClosed(DomainError):
    code = "ROUND_CLOSED"


class NotEnrolled(DomainError):
    code = "NOT_ENROLLED"


class RatingOutOfRange(DomainError):
    code = "RATING_OUT_OF_RANGE"


class RoundStillOpen(DomainError):
    code = "ROUND_STILL_OPEN"


class UnratedStatement(DomainError):
    code = "UNRATED_STATEMENT"


class NothingToCarry(DomainError):
    """Every statement reached consensus; the process may finish early."""

    code = "NOTHING_TO_CARRY"


class ProcessIncomplete(DomainError):
    code = "PROCESS_INCOMPLETE"


class UnknownStatement(DomainError):
    code = "UNKNOWN_STATEMENT"
