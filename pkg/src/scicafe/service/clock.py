"""Injectable clocks. All time-dependent behavior takes one of these; the
simulation harness drives VirtualClock, production uses WallClock."""

from __future__ import annotations

import time
from typing import Protocol


class Clock(Protocol):
    def now_ms(self) -> int: ...


class WallClock:
    def now_ms(self) -> int:
        return int(time.time() * 1000)


class VirtualClock:
    def __init__(self, start_ms: int = 0):
        self._now = start_ms

    def now_ms(self) -> int:
        return self._now

    def set(self, now_ms: int) -> None:
        if now_ms < self._now:
            raise ValueError(f"virtual time may not go backwards ({now_ms} < {self._now})")
        self._now = now_ms

    def advance(self, delta_ms: int) -> None:
        self.set(self._now + delta_ms)
