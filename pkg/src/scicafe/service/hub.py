"""SessionHub: the live heart of the service.

One hub owns every session: it serializes commands per session (single
logical writer), persists events write-ahead, fans them out to subscribers
in gapless seq order, deduplicates client retries, and schedules the
rotation timers. All methods are thread-safe; per-session mutation takes
that session's lock.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Callable

from scicafe.core import apply, create_session
from scicafe.core.commands import Rotate
from scicafe.core.errors import NoOpenTables
from scicafe.core.events import ROTATED, SESSION_ARCHIVED, TABLE_CLOSED, TABLE_OPENED, Event
from scicafe.core.model import SYSTEM_ACTOR, SessionConfig, SessionState
from scicafe.errors import DomainError
from scicafe.service.clock import Clock, WallClock
from scicafe.service.protocol import (
    NOT_AUTHORIZED,
    READ_ONLY,
    UNKNOWN_SESSION,
    ProtocolError,
    error_frame,
    event_frame,
)
from scicafe.service.storage import SessionStorage

Sink = Callable[[dict], None]


@dataclass
class IngestResult:
    seq: int
    duplicate: bool
    events: list[Event] = field(default_factory=list)


@dataclass
class _Subscriber:
    sub_id: int
    actor: str
    sink: Sink


class _Runtime:
    def __init__(self, state: SessionState):
        self.state = state
        self.lock = threading.RLock()
        self.dedupe: dict[tuple[str, int], int] = {}  # (actor, client_seq) -> first seq
        self.subscribers: dict[int, _Subscriber] = {}
        self.read_only = False
        self.next_rotation_ms: int | None = None


class SessionHub:
    def __init__(self, storage: SessionStorage, clock: Clock | None = None):
        self.storage = storage
        self.clock = clock or WallClock()
        self._runtimes: dict[str, _Runtime] = {}
        self._lock = threading.Lock()
        self._sub_counter = 0

    # --- session lifecycle ---

    def create_session(
        self,
        config: SessionConfig,
        organizer: str,
        session_id: str | None = None,
        now: int | None = None,
    ) -> tuple[str, SessionState]:
        session_id = session_id or uuid.uuid4().hex[:12]
        now = self.clock.now_ms() if now is None else now
        with self._lock:
            if session_id in self._runtimes or self.storage.exists(session_id):
                raise ProtocolError("SESSION_EXISTS", f"session {session_id} already exists")
            state, event = create_session(config, organizer, session_id, now)
            self.storage.append(session_id, [event], state)
            self._runtimes[session_id] = _Runtime(state)
        return session_id, state

    def state_of(self, session_id: str) -> SessionState:
        return self._runtime(session_id).state

    def events_since(self, session_id: str, since: int = 0) -> list[Event]:
        self._runtime(session_id)  # ensure it exists / is loaded
        return self.storage.read_events(session_id, since=since)

    def list_sessions(self) -> list[SessionState]:
        ids = set(self.storage.list_sessions()) | set(self._runtimes)
        return [self.state_of(session_id) for session_id in sorted(ids)]

    # --- command ingestion ---

    def ingest(
        self,
        session_id: str,
        actor: str,
        client_seq: int | None,
        command,
        now: int | None = None,
    ) -> IngestResult:
        """Apply one command on the session's serial queue.

        Duplicate (actor, client_seq) pairs are re-acked without
        re-applying. Events are persisted before broadcast (write-ahead).
        """
        runtime = self._runtime(session_id)
        now = self.clock.now_ms() if now is None else now
        with runtime.lock:
            if client_seq is not None:
                seen = runtime.dedupe.get((actor, client_seq))
                if seen is not None:
                    return IngestResult(seq=seen, duplicate=True)
            if runtime.read_only:
                raise ProtocolError(READ_ONLY, "session is read-only after a storage failure")
            new_state, events = apply(runtime.state, command, actor, now)
            try:
                self.storage.append(session_id, events, new_state)
            except OSError as exc:
                runtime.read_only = True
                self._broadcast_frame(
                    runtime,
                    error_frame(READ_ONLY, f"storage failed: {exc}", session=session_id),
                )
                raise ProtocolError(READ_ONLY, f"storage failed: {exc}") from exc
            runtime.state = new_state
            first_seq = events[0].seq
            if client_seq is not None:
                runtime.dedupe[(actor, client_seq)] = first_seq
            ack = (actor, client_seq) if client_seq is not None else None
            for event in events:
                self._broadcast_frame(runtime, event_frame(session_id, event, ack=ack))
            self._update_rotation_schedule(runtime, events)
            return IngestResult(seq=first_seq, duplicate=False, events=events)

    # --- subscriptions ---

    def subscribe(self, session_id: str, actor: str, sink: Sink, since: int = 0) -> int:
        """Attach a sink; replays events > since, then streams live.

        Non-members of a restricted session are rejected and receive no
        event frames at all.
        """
        runtime = self._runtime(session_id)
        with runtime.lock:
            if not self.is_member(runtime.state, actor):
                raise ProtocolError(
                    NOT_AUTHORIZED, f"{actor} is not in the authorized audience"
                )
            with self._lock:
                self._sub_counter += 1
                sub_id = self._sub_counter
            for event in self.storage.read_events(session_id, since=since):
                sink(event_frame(session_id, event))
            runtime.subscribers[sub_id] = _Subscriber(sub_id=sub_id, actor=actor, sink=sink)
            return sub_id

    def unsubscribe(self, session_id: str, sub_id: int) -> None:
        runtime = self._runtimes.get(session_id)
        if runtime is not None:
            with runtime.lock:
                runtime.subscribers.pop(sub_id, None)

    # --- rotation scheduling ---

    def next_rotation_due(self) -> int | None:
        dues = [
            r.next_rotation_ms
            for r in self._runtimes.values()
            if r.next_rotation_ms is not None
        ]
        return min(dues) if dues else None

    def tick(self, now: int | None = None) -> list[tuple[str, int]]:
        """Fire every rotation that has come due; returns (session, seq) pairs.

        Each Rotated event is stamped with its scheduled due time, so a
        coarse tick resolution cannot skew the 20-minute cadence.
        """
        now = self.clock.now_ms() if now is None else now
        fired: list[tuple[str, int]] = []
        while True:
            candidates = [
                (runtime.next_rotation_ms, session_id)
                for session_id, runtime in list(self._runtimes.items())
                if runtime.next_rotation_ms is not None and runtime.next_rotation_ms <= now
            ]
            if not candidates:
                return fired
            due, session_id = min(candidates)
            runtime = self._runtimes[session_id]
            try:
                result = self.ingest(session_id, SYSTEM_ACTOR, None, Rotate(), now=due)
                fired.append((session_id, result.seq))
            except (NoOpenTables, DomainError, ProtocolError):
                runtime.next_rotation_ms = None

    def _update_rotation_schedule(self, runtime: _Runtime, events: list[Event]) -> None:
        for event in events:
            if event.kind == TABLE_OPENED and runtime.next_rotation_ms is None:
                runtime.next_rotation_ms = event.at + self._rotation_ms(runtime)
            elif event.kind == ROTATED:
                runtime.next_rotation_ms = event.at + self._rotation_ms(runtime)
            elif event.kind in (TABLE_CLOSED, SESSION_ARCHIVED):
                if not runtime.state.open_table_ids():
                    runtime.next_rotation_ms = None

    @staticmethod
    def _rotation_ms(runtime: _Runtime) -> int:
        return runtime.state.config.rotation_minutes * 60_000

    # --- internals ---

    def _runtime(self, session_id: str) -> _Runtime:
        runtime = self._runtimes.get(session_id)
        if runtime is not None:
            return runtime
        with self._lock:
            runtime = self._runtimes.get(session_id)
            if runtime is not None:
                return runtime
            if not self.storage.exists(session_id):
                raise ProtocolError(UNKNOWN_SESSION, f"no session {session_id}")
            loaded = self.storage.load(session_id)
            runtime = _Runtime(loaded.state)
            self._runtimes[session_id] = runtime
            return runtime

    @staticmethod
    def is_member(state: SessionState, actor: str) -> bool:
        """Audience rule: public sessions admit anyone; restricted sessions
        admit the configured group, role holders, and the organizer."""
        privacy = state.config.privacy
        if privacy.kind == "public":
            return True
        return actor == state.organizer or actor in privacy.group or actor in state.roles

    def _broadcast_frame(self, runtime: _Runtime, frame: dict) -> None:
        for subscriber in list(runtime.subscribers.values()):
            try:
                subscriber.sink(frame)
            except Exception:  # a dead sink must not poison the others
                runtime.subscribers.pop(subscriber.sub_id, None)
