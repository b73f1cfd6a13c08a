"""Errors raised by the knowledge-exchange functions."""

from __future__ import annotations

from scicafe.errors import DomainError


class EmptyDocument(DomainError):
    """The document has no tokens once the tokenizer filtered it."""

    code = "EMPTY_DOCUMENT"


class RepositoryUnavailable(DomainError):
    code = "REPOSITORY_UNAVAILABLE"


class CorruptLog(DomainError):
    code = "CORRUPT_LOG"
