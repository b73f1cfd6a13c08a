"""Shared error base for all scicafe modules.

Every domain-level failure raises a DomainError subclass carrying a stable
machine-readable ``code``. The service layer maps codes onto HTTP statuses
and wire-protocol error frames; the CLI maps them onto exit code 1.
"""

from __future__ import annotations


class DomainError(Exception):
    """A rule of the domain was violated; the request is at fault, not the system."""

    code = "DOMAIN_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code
