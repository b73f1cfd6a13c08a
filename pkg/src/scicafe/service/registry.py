"""Delphi process registry with JSON-file persistence (one file per process)."""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path

from scicafe.delphi.model import DelphiProcess
from scicafe.errors import DomainError
from scicafe.service.codec import dumps_line, process_from_dict, process_to_dict


class UnknownProcess(DomainError):
    code = "UNKNOWN_PROCESS"


class DelphiRegistry:
    def __init__(self, directory: str | Path):
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._processes: dict[str, DelphiProcess] = {}
        for path in sorted(self._dir.glob("*.json")):
            process = process_from_dict(json.loads(path.read_text("utf-8")))
            self._processes[process.id] = process

    def new_id(self) -> str:
        return uuid.uuid4().hex[:12]

    def get(self, process_id: str) -> DelphiProcess:
        with self._lock:
            process = self._processes.get(process_id)
        if process is None:
            raise UnknownProcess(f"no delphi process {process_id}")
        return process

    def put(self, process: DelphiProcess) -> None:
        with self._lock:
            self._processes[process.id] = process
            path = self._dir / f"{process.id}.json"
            tmp = path.with_suffix(".tmp")
            tmp.write_text(dumps_line(process_to_dict(process)), "utf-8")
            tmp.replace(path)

    def exists(self, process_id: str) -> bool:
        with self._lock:
            return process_id in self._processes

    def list(self) -> list[DelphiProcess]:
        with self._lock:
            return [self._processes[pid] for pid in sorted(self._processes)]
