"""Pluggable token -> user-id resolution.

With a static token table configured, only listed tokens resolve. Without
one (dev mode) the token itself is taken as the user id, so any non-empty
token authenticates.
"""

from __future__ import annotations

from typing import Mapping, Protocol


class TokenResolver(Protocol):
    def resolve(self, token: str | None) -> str | None: ...


class StaticTokenResolver:
    def __init__(self, tokens: Mapping[str, str]):
        self._tokens = dict(tokens)

    def resolve(self, token: str | None) -> str | None:
        if not token:
            return None
        return self._tokens.get(token)


class IdentityResolver:
    """Dev mode: the token is the user id."""

    def resolve(self, token: str | None) -> str | None:
        return token or None


def resolver_for(tokens: Mapping[str, str] | None) -> TokenResolver:
    if tokens:
        return StaticTokenResolver(tokens)
    return IdentityResolver()
