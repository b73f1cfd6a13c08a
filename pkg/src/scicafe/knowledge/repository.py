"""Clients for the external knowledge repository (label -> uri lookup).

Two modes: a fixture client backed by a local table (tests and offline
runs; cache never expires) and a live HTTP client (5 s timeout, misses
and errors are negative-cached). Both record every lookup call so tests
can assert caching behavior. Lookups may run concurrently; cache writes
are guarded and last-write-wins.
"""

from __future__ import annotations

import logging
import threading
import time
from pathlib import Path
from typing import Mapping, Protocol

import httpx

from scicafe.knowledge.errors import RepositoryUnavailable

log = logging.getLogger(__name__)

_MISS = object()


class RepositoryClient(Protocol):
    def lookup(self, surface: str) -> str | None: ...


class _CachingClient:
    def __init__(self, cache_ttl: float | None = None, now_fn=time.monotonic):
        self._cache: dict[str, tuple[str | None, float | None]] = {}
        self._lock = threading.Lock()
        self._ttl = cache_ttl
        self._now = now_fn
        self.calls: list[str] = []  # every lookup() invocation, cached or not
        self.fetches: list[str] = []  # lookups that missed the cache

    def lookup(self, surface: str) -> str | None:
        self.calls.append(surface)
        cached = self._cached(surface)
        if cached is not _MISS:
            return cached
        self.fetches.append(surface)
        uri = self._fetch(surface)
        expires = None if self._ttl is None else self._now() + self._ttl
        with self._lock:
            self._cache[surface] = (uri, expires)
        return uri

    def _cached(self, surface: str):
        entry = self._cache.get(surface)
        if entry is None:
            return _MISS
        uri, expires = entry
        if expires is not None and self._now() > expires:
            return _MISS
        return uri

    def _fetch(self, surface: str) -> str | None:
        raise NotImplementedError


class FixtureRepositoryClient(_CachingClient):
    """Deterministic lookups from an in-memory table; entries never expire."""

    def __init__(self, table: Mapping[str, str]):
        super().__init__(cache_ttl=None)
        self._table = dict(table)

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureRepositoryClient":
        """Load ``surface<TAB>uri`` lines."""
        table: dict[str, str] = {}
        for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            if "\t" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'surface<TAB>uri'")
            surface, uri = line.split("\t", 1)
            table[surface.strip()] = uri.strip()
        return cls(table)

    def _fetch(self, surface: str) -> str | None:
        return self._table.get(surface)


class HttpRepositoryClient(_CachingClient):
    """Live label lookups: GET <endpoint>?label=<surface> -> list of uris.

    The first candidate wins. On timeout or transport failure the miss is
    recorded (negative-cached) unless strict mode is on, which raises
    RepositoryUnavailable instead.
    """

    def __init__(
        self,
        endpoint: str,
        timeout: float = 5.0,
        strict: bool = False,
        cache_ttl: float | None = None,
        transport: httpx.BaseTransport | None = None,
    ):
        super().__init__(cache_ttl=cache_ttl)
        self._endpoint = endpoint
        self._strict = strict
        self._http = httpx.Client(timeout=timeout, transport=transport)

    def _fetch(self, surface: str) -> str | None:
        try:
            response = self._http.get(self._endpoint, params={"label": surface})
            response.raise_for_status()
            body = response.json()
        except (httpx.HTTPError, ValueError) as exc:
            if self._strict:
                raise RepositoryUnavailable(f"lookup of {surface!r} failed: {exc}") from exc
            log.warning("repository lookup failed for %r: %s", surface, exc)
            return None
        candidates = body.get("uris") if isinstance(body, dict) else body
        if isinstance(candidates, list) and candidates:
            return str(candidates[0])
        return None

    def close(self) -> None:
        self._http.close()
