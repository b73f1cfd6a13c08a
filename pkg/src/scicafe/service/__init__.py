"""Networked host for live sessions: FastAPI app, hub, storage, protocol."""

from scicafe.service.app import create_app
from scicafe.service.clock import Clock, VirtualClock, WallClock
from scicafe.service.config import ServiceConfig, load_config
from scicafe.service.hub import SessionHub
from scicafe.service.storage import SessionStorage

__all__ = [
    "Clock",
    "ServiceConfig",
    "SessionHub",
    "SessionStorage",
    "VirtualClock",
    "WallClock",
    "create_app",
    "load_config",
]
