"""Append-only persistence: one JSON line per event, snapshots every N.

Layout under the storage root:
    <session_id>/events.log            append-only, one event per line
    <session_id>/snapshots/snap-<seq>.json

Writes are write-ahead: an event line is appended and flushed before any
subscriber sees it. Recovery loads the latest snapshot and folds the log
tail; the result is bit-identical to a full replay. A torn final line
(crash mid-write) is truncated away and reported; corruption anywhere
else fails the load.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

from scicafe.core import fold, replay
from scicafe.core.errors import CorruptEvent, GapInSequence
from scicafe.core.events import Event
from scicafe.core.model import SessionState
from scicafe.service.codec import (
    dumps_line,
    event_from_dict,
    event_to_dict,
    state_from_dict,
    state_to_dict,
)

log = logging.getLogger(__name__)

LOG_NAME = "events.log"
SNAP_DIR = "snapshots"


@dataclass
class LoadResult:
    state: SessionState
    truncated_line: str | None = None  # torn tail, if one was dropped


class SessionStorage:
    def __init__(self, root: str | Path, snapshot_interval: int = 1000, fsync: bool = False):
        if snapshot_interval < 1:
            raise ValueError("snapshot_interval must be >= 1")
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.snapshot_interval = snapshot_interval
        self.fsync = fsync
        self._handles: dict[str, IO[str]] = {}

    # --- writes ---

    def append(self, session_id: str, events: Iterable[Event], state: SessionState) -> None:
        """Durably append events, then snapshot if an interval was crossed.

        Raises OSError on storage failure; nothing may be broadcast for
        events this call did not persist.
        """
        events = list(events)
        if not events:
            return
        handle = self._handle(session_id)
        for event in events:
            handle.write(dumps_line(event_to_dict(event)) + "\n")
        handle.flush()
        if self.fsync:
            os.fsync(handle.fileno())
        first = events[0].seq
        last = events[-1].seq
        if (last // self.snapshot_interval) > ((first - 1) // self.snapshot_interval):
            self._write_snapshot(session_id, state)

    def _write_snapshot(self, session_id: str, state: SessionState) -> None:
        snap_dir = self.root / session_id / SNAP_DIR
        snap_dir.mkdir(parents=True, exist_ok=True)
        path = snap_dir / f"snap-{state.last_seq:09d}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(dumps_line({"seq": state.last_seq, "state": state_to_dict(state)}), "utf-8")
        tmp.replace(path)

    # --- reads ---

    def exists(self, session_id: str) -> bool:
        return (self.root / session_id / LOG_NAME).is_file()

    def list_sessions(self) -> list[str]:
        if not self.root.is_dir():
            return []
        return sorted(p.parent.name for p in self.root.glob(f"*/{LOG_NAME}"))

    def read_events(self, session_id: str, since: int = 0) -> list[Event]:
        events = []
        for line in self._read_good_lines(session_id)[0]:
            event = event_from_dict(json.loads(line))
            if event.seq > since:
                events.append(event)
        return events

    def load(self, session_id: str) -> LoadResult:
        """Recover state: latest usable snapshot plus the log tail."""
        lines, truncated = self._read_good_lines(session_id, repair=True)
        if not lines:
            raise CorruptEvent(f"session {session_id} has an empty log")
        last_logged_seq = self._seq_of(lines[-1])
        state = None
        snapshot_seq = 0
        for snap_path in sorted(self._snapshots(session_id), reverse=True):
            data = json.loads(snap_path.read_text("utf-8"))
            if data["seq"] <= last_logged_seq:
                state = state_from_dict(data["state"])
                snapshot_seq = data["seq"]
                break
        expected = snapshot_seq + 1
        for line in lines:
            event = event_from_dict(json.loads(line))
            if event.seq <= snapshot_seq:
                continue
            if event.seq != expected:
                raise GapInSequence(
                    f"session {session_id}: expected seq {expected}, got {event.seq}"
                )
            state = fold(state, event)
            expected += 1
        if state is None:
            raise CorruptEvent(f"session {session_id}: no state recoverable")
        return LoadResult(state=state, truncated_line=truncated)

    def load_by_full_replay(self, session_id: str) -> SessionState:
        """Rebuild ignoring snapshots; recovery equivalence checks use this."""
        return replay(self.read_events(session_id))

    # --- internals ---

    def _handle(self, session_id: str) -> IO[str]:
        handle = self._handles.get(session_id)
        if handle is None or handle.closed:
            directory = self.root / session_id
            directory.mkdir(parents=True, exist_ok=True)
            handle = open(directory / LOG_NAME, "a", encoding="utf-8")
            self._handles[session_id] = handle
        return handle

    def close(self) -> None:
        for handle in self._handles.values():
            if not handle.closed:
                handle.close()
        self._handles.clear()

    def _snapshots(self, session_id: str) -> list[Path]:
        snap_dir = self.root / session_id / SNAP_DIR
        if not snap_dir.is_dir():
            return []
        return sorted(snap_dir.glob("snap-*.json"))

    def _read_good_lines(self, session_id: str, repair: bool = False) -> tuple[list[str], str | None]:
        path = self.root / session_id / LOG_NAME
        if not path.is_file():
            raise CorruptEvent(f"no such session {session_id}")
        raw = path.read_text("utf-8")
        if not raw:
            return [], None
        lines = raw.split("\n")
        trailing_newline = lines and lines[-1] == ""
        if trailing_newline:
            lines.pop()
        truncated = None
        if lines:
            last = lines[-1]
            torn = not trailing_newline or not _parses(last)
            if torn:
                truncated = lines.pop()
                if repair:
                    keep = "".join(line + "\n" for line in lines)
                    path.write_text(keep, "utf-8")
                    log.warning(
                        "session %s: dropped torn final log line (%d bytes)",
                        session_id,
                        len(truncated),
                    )
        for line in lines:
            if not _parses(line):
                raise CorruptEvent(f"session {session_id}: corrupt mid-log line")
        return lines, truncated

    @staticmethod
    def _seq_of(line: str) -> int:
        return json.loads(line)["seq"]


def _parses(line: str) -> bool:
    try:
        json.loads(line)
        return True
    except json.JSONDecodeError:
        return False
