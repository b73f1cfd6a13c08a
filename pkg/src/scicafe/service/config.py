"""Service configuration: one JSON file, overridable by environment.

The CLI resolves the file path from SCICAFE_CONFIG; individual settings can
be overridden via SCICAFE_* variables regardless of the file.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping


@dataclass
class ServiceConfig:
    listen: str = "127.0.0.1:8000"
    storage_dir: str = "./scicafe-data"
    snapshot_interval: int = 1000
    rotation_tick_seconds: float = 1.0
    repository_mode: str = "off"  # "off" | "fixture" | "live"
    repository_fixture: str | None = None
    repository_endpoint: str | None = None
    repository_timeout: float = 5.0
    repository_strict: bool = False
    repository_cache_ttl: float | None = None
    gazetteer_path: str | None = None
    tokens: dict[str, str] | None = None  # static token -> user id; None = dev identity mode
    ui_dir: str | None = None  # built frontend to serve at /ui (optional)

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


_ENV_OVERRIDES = {
    "SCICAFE_LISTEN": ("listen", str),
    "SCICAFE_STORAGE_DIR": ("storage_dir", str),
    "SCICAFE_SNAPSHOT_INTERVAL": ("snapshot_interval", int),
    "SCICAFE_ROTATION_TICK": ("rotation_tick_seconds", float),
    "SCICAFE_REPO_MODE": ("repository_mode", str),
    "SCICAFE_REPO_FIXTURE": ("repository_fixture", str),
    "SCICAFE_REPO_ENDPOINT": ("repository_endpoint", str),
    "SCICAFE_REPO_TIMEOUT": ("repository_timeout", float),
    "SCICAFE_GAZETTEER": ("gazetteer_path", str),
    "SCICAFE_UI_DIR": ("ui_dir", str),
}


def load_config(
    path: str | Path | None = None, env: Mapping[str, str] | None = None
) -> ServiceConfig:
    env = os.environ if env is None else env
    if path is None:
        path = env.get("SCICAFE_CONFIG")
    data: dict = {}
    if path:
        data = json.loads(Path(path).read_text("utf-8"))
        known = {f.name for f in fields(ServiceConfig)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    config = ServiceConfig(**data)
    for var, (attr, cast) in _ENV_OVERRIDES.items():
        if var in env:
            setattr(config, attr, cast(env[var]))
    return config
