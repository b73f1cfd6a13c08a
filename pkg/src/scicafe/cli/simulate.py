"""Scripted multi-client simulation against an in-process engine.

Script grammar (line-oriented, '#' comments):

    at <time> <actor> <command> <json-payload>
    expect event <Kind> [<json-subset>] [at <time>]
    expect error <CODE>
    expect count <Kind> <n>

Times are milliseconds, or suffixed: 500ms, 20s, 20m, 1h. Entries must be
time-ordered. The virtual clock drives the rotation scheduler, so timer
behavior replays deterministically. Every actor named in the script (plus
one silent observer) is subscribed; at the end the harness asserts all
subscriber transcripts are identical.

The payload key "client_seq" is reserved: it sets the envelope's client
sequence number so scripts can exercise retry/idempotence.
"""

from __future__ import annotations

import json
import re
import tempfile
from dataclasses import dataclass, field

from scicafe.core.commands import command_from_payload
from scicafe.core.model import SessionConfig
from scicafe.core.commands import privacy_from_payload
from scicafe.errors import DomainError
from scicafe.service.clock import VirtualClock
from scicafe.service.hub import SessionHub
from scicafe.service.protocol import ProtocolError
from scicafe.service.storage import SessionStorage

SESSION_ID = "sim"
OBSERVER = "__observer__"

_TIME = re.compile(r"^(\d+)(ms|s|m|h)?$")
_UNITS = {"ms": 1, "s": 1_000, "m": 60_000, "h": 3_600_000, None: 1}


class ScriptError(Exception):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class AtEntry:
    lineno: int
    at: int
    actor: str
    command: str
    payload: dict


@dataclass
class ExpectEntry:
    lineno: int
    text: str
    check: str  # "event" | "error" | "count"
    kind: str | None = None
    subset: dict | None = None
    at: int | None = None
    code: str | None = None
    count: int | None = None


@dataclass
class AssertionResult:
    lineno: int
    text: str
    passed: bool
    detail: str = ""


@dataclass
class Transcript:
    assertions: list[AssertionResult] = field(default_factory=list)
    command_log: list[tuple[AtEntry, str]] = field(default_factory=list)
    events: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)


def parse_time(token: str, lineno: int) -> int:
    match = _TIME.match(token)
    if not match:
        raise ScriptError(lineno, f"bad time {token!r} (use e.g. 500ms, 20s, 20m, 1h)")
    return int(match.group(1)) * _UNITS[match.group(2)]


def parse_script(text: str) -> list[AtEntry | ExpectEntry]:
    entries: list[AtEntry | ExpectEntry] = []
    last_at = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("at "):
            parts = line.split(None, 3)
            if len(parts) < 4:
                raise ScriptError(lineno, "expected: at <time> <actor> <command> <payload>")
            _, time_token, actor, rest = parts
            at = parse_time(time_token, lineno)
            if at < last_at:
                raise ScriptError(lineno, f"time {time_token} goes backwards")
            last_at = at
            command, _, payload_text = rest.partition(" ")
            payload_text = payload_text.strip() or "{}"
            try:
                payload = json.loads(payload_text)
            except json.JSONDecodeError as exc:
                raise ScriptError(lineno, f"bad JSON payload: {exc}") from exc
            if not isinstance(payload, dict):
                raise ScriptError(lineno, "payload must be a JSON object")
            entries.append(AtEntry(lineno, at, actor, command, payload))
        elif line.startswith("expect "):
            entries.append(_parse_expect(line, lineno))
        else:
            raise ScriptError(lineno, f"unrecognized directive {line.split()[0]!r}")
    return entries


def _parse_expect(line: str, lineno: int) -> ExpectEntry:
    parts = line.split(None, 2)
    if len(parts) < 2:
        raise ScriptError(lineno, "empty expect")
    what = parts[1]
    rest = parts[2] if len(parts) > 2 else ""
    if what == "error":
        code = rest.strip()
        if not code:
            raise ScriptError(lineno, "expect error needs a code")
        return ExpectEntry(lineno, line, check="error", code=code)
    if what == "count":
        bits = rest.split()
        if len(bits) != 2 or not bits[1].isdigit():
            raise ScriptError(lineno, "expected: expect count <Kind> <n>")
        return ExpectEntry(lineno, line, check="count", kind=bits[0], count=int(bits[1]))
    if what == "event":
        kind, _, tail = rest.partition(" ")
        if not kind:
            raise ScriptError(lineno, "expect event needs an event kind")
        tail = tail.strip()
        at = None
        subset = None
        at_match = re.search(r"\bat\s+(\S+)$", tail) if not tail.startswith("{") else None
        if tail.startswith("{"):
            # json subset, optionally followed by: at <time>
            depth = 0
            end = None
            for i, ch in enumerate(tail):
                if ch == "{":
                    depth += 1
                elif ch == "}":
                    depth -= 1
                    if depth == 0:
                        end = i + 1
                        break
            if end is None:
                raise ScriptError(lineno, "unbalanced JSON subset")
            try:
                subset = json.loads(tail[:end])
            except json.JSONDecodeError as exc:
                raise ScriptError(lineno, f"bad JSON subset: {exc}") from exc
            trailer = tail[end:].strip()
            if trailer:
                match = re.fullmatch(r"at\s+(\S+)", trailer)
                if not match:
                    raise ScriptError(lineno, f"unexpected trailer {trailer!r}")
                at = parse_time(match.group(1), lineno)
        elif at_match:
            at = parse_time(at_match.group(1), lineno)
        elif tail:
            raise ScriptError(lineno, f"unexpected trailer {tail!r}")
        return ExpectEntry(lineno, line, check="event", kind=kind, subset=subset, at=at)
    raise ScriptError(lineno, f"unknown expect form {what!r}")


def subset_matches(subset, value) -> bool:
    if isinstance(subset, dict):
        if not isinstance(value, dict):
            return False
        return all(key in value and subset_matches(sub, value[key]) for key, sub in subset.items())
    if isinstance(subset, list):
        if not isinstance(value, list) or len(subset) != len(value):
            return False
        return all(subset_matches(s, v) for s, v in zip(subset, value))
    return subset == value


class Simulation:
    """One scripted run: fresh hub, virtual clock, auto-subscribed actors."""

    def __init__(self, entries: list[AtEntry | ExpectEntry]):
        self.entries = entries
        self.clock = VirtualClock(0)
        self._tmp = tempfile.TemporaryDirectory(prefix="scicafe-sim-")
        self.hub = SessionHub(SessionStorage(self._tmp.name), clock=self.clock)
        self.transcript = Transcript()
        self.frames: dict[str, list[dict]] = {}
        self.events: list[dict] = []
        self.last_outcome: tuple[str, str] | None = None  # ("ok", seq) | ("error", code)
        self.client_seqs: dict[str, int] = {}
        self._subscribed = False

    def run(self) -> Transcript:
        try:
            for entry in self.entries:
                if isinstance(entry, AtEntry):
                    self._advance_to(entry.at)
                    self._execute(entry)
                else:
                    self._assert(entry)
            self._assert_subscribers_consistent()
            self.transcript.events = [f["event"] for f in self.events]
        finally:
            self._tmp.cleanup()
        return self.transcript

    # --- execution ---

    def _advance_to(self, at: int) -> None:
        while True:
            due = self.hub.next_rotation_due()
            if due is None or due > at:
                break
            self.clock.set(due)
            self.hub.tick(due)
        self.clock.set(at)

    def _execute(self, entry: AtEntry) -> None:
        try:
            if entry.command == "wait":
                # time-advance directive; _advance_to already fired the timers
                self.last_outcome = ("ok", "wait")
                self.transcript.command_log.append((entry, "ok:wait"))
                self._drain_events()
                return
            if entry.command == "create_session":
                self._create_session(entry)
                outcome = ("ok", "1")
            else:
                payload = dict(entry.payload)
                client_seq = payload.pop("client_seq", None)
                if client_seq is None:
                    self.client_seqs[entry.actor] = self.client_seqs.get(entry.actor, 0) + 1
                    client_seq = self.client_seqs[entry.actor]
                command = command_from_payload(entry.command, payload)
                result = self.hub.ingest(
                    SESSION_ID, entry.actor, client_seq, command, now=entry.at
                )
                outcome = ("ok", str(result.seq))
        except KeyError:
            outcome = ("error", "UNKNOWN_COMMAND")
        except (DomainError, ProtocolError) as exc:
            outcome = ("error", exc.code)
        self.last_outcome = outcome
        self.transcript.command_log.append((entry, f"{outcome[0]}:{outcome[1]}"))
        self._drain_events()

    def _create_session(self, entry: AtEntry) -> None:
        payload = dict(entry.payload)
        kwargs = dict(
            title=payload.get("title", "Simulated Session"),
            table_count=payload.get("tables", 1),
            rotation_minutes=payload.get("rotation_minutes", 20),
        )
        if "areas" in payload:
            kwargs["areas"] = tuple(payload["areas"])
        if "privacy" in payload:
            kwargs["privacy"] = privacy_from_payload(payload["privacy"])
        if "recency_threshold_seconds" in payload:
            kwargs["recency_threshold_seconds"] = payload["recency_threshold_seconds"]
        config = SessionConfig(**kwargs)
        self.hub.create_session(config, entry.actor, session_id=SESSION_ID, now=entry.at)
        self._subscribe_everyone()

    def _subscribe_everyone(self) -> None:
        if self._subscribed:
            return
        self._subscribed = True
        actors = [OBSERVER]
        for entry in self.entries:
            if isinstance(entry, AtEntry) and entry.actor not in actors:
                actors.append(entry.actor)
        for actor in actors:
            frames: list[dict] = []
            self.frames[actor] = frames
            try:
                self.hub.subscribe(SESSION_ID, actor, frames.append)
            except (ProtocolError, DomainError):
                pass  # non-members of a restricted session stay at zero frames

    def _drain_events(self) -> None:
        observer = self.frames.get(OBSERVER, [])
        for frame in observer[len(self.events):]:
            self.events.append(frame)

    # --- assertions ---

    def _assert(self, entry: ExpectEntry) -> None:
        if entry.check == "error":
            ok = self.last_outcome is not None and self.last_outcome == ("error", entry.code)
            detail = f"last outcome was {self.last_outcome}"
        elif entry.check == "count":
            actual = sum(1 for f in self.events if f["event"]["kind"] == entry.kind)
            ok = actual == entry.count
            detail = f"saw {actual} {entry.kind} events"
        else:
            ok, detail = self._match_event(entry)
        self.transcript.assertions.append(
            AssertionResult(entry.lineno, entry.text, ok, "" if ok else detail)
        )

    def _match_event(self, entry: ExpectEntry) -> tuple[bool, str]:
        candidates = [f["event"] for f in self.events if f["event"]["kind"] == entry.kind]
        if entry.at is not None:
            candidates = [e for e in candidates if e["at"] == entry.at]
        if entry.subset is not None:
            candidates = [e for e in candidates if subset_matches(entry.subset, e["payload"])]
        if candidates:
            return True, ""
        return False, f"no {entry.kind} event matched"

    def _assert_subscribers_consistent(self) -> None:
        if not self._subscribed:
            return
        sequences = {
            actor: [f["seq"] for f in frames]
            for actor, frames in self.frames.items()
            if frames
        }
        baseline = sequences.get(OBSERVER, [])
        mismatched = [a for a, seqs in sequences.items() if seqs != baseline]
        gapless = baseline == list(range(1, len(baseline) + 1))
        ok = not mismatched and gapless
        detail = "" if ok else f"mismatched: {mismatched}, gapless={gapless}"
        self.transcript.assertions.append(
            AssertionResult(0, "subscribers observe one identical gapless sequence", ok, detail)
        )


def run_script(text: str) -> Transcript:
    return Simulation(parse_script(text)).run()
