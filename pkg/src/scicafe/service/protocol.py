"""Wire protocol: newline-delimited single-line JSON envelopes.

Client -> server (command envelope), fields exactly:
    v, session, actor, client_seq, type, payload, ts
Server -> client (event envelope), fields exactly:
    v, session, seq, event, ack
plus ack frames ({v, session, ack, seq, duplicate}) and error frames
({v, error, message, session?, ack?}). Unknown fields are ignored; an
unknown command type earns an UNKNOWN_COMMAND error frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from scicafe.core.commands import COMMAND_TYPES, Command, command_from_payload
from scicafe.core.events import Event
from scicafe.service.codec import event_to_dict

PROTOCOL_VERSION = 1

UNSUPPORTED_VERSION = "UNSUPPORTED_VERSION"
UNKNOWN_COMMAND = "UNKNOWN_COMMAND"
MALFORMED = "MALFORMED"
UNKNOWN_SESSION = "UNKNOWN_SESSION"
AUTH_FAILURE = "AUTH_FAILURE"
NOT_AUTHORIZED = "NOT_AUTHORIZED"
READ_ONLY = "READ_ONLY"


class ProtocolError(Exception):
    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code
        self.message = message or code


@dataclass(frozen=True)
class CommandEnvelope:
    v: int
    session: str
    actor: str
    client_seq: int
    type: str
    payload: dict[str, Any]
    ts: int

    def command(self) -> Command:
        try:
            return command_from_payload(self.type, self.payload)
        except KeyError:
            raise ProtocolError(UNKNOWN_COMMAND, f"unknown command type {self.type!r}") from None
        except (TypeError, ValueError) as exc:
            raise ProtocolError(MALFORMED, f"bad payload for {self.type}: {exc}") from exc


def parse_command_envelope(raw: str | bytes | dict) -> CommandEnvelope:
    if isinstance(raw, (str, bytes)):
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ProtocolError(MALFORMED, f"not valid JSON: {exc}") from exc
    else:
        data = raw
    if not isinstance(data, dict):
        raise ProtocolError(MALFORMED, "envelope must be an object")
    missing = [k for k in ("v", "session", "actor", "client_seq", "type", "payload", "ts") if k not in data]
    if missing:
        raise ProtocolError(MALFORMED, f"missing fields: {', '.join(missing)}")
    if data["v"] != PROTOCOL_VERSION:
        raise ProtocolError(UNSUPPORTED_VERSION, f"protocol v{data['v']} unsupported")
    if data["type"] not in COMMAND_TYPES:
        raise ProtocolError(UNKNOWN_COMMAND, f"unknown command type {data['type']!r}")
    if not isinstance(data["payload"], dict):
        raise ProtocolError(MALFORMED, "payload must be an object")
    if not isinstance(data["client_seq"], int):
        raise ProtocolError(MALFORMED, "client_seq must be an integer")
    return CommandEnvelope(
        v=data["v"],
        session=str(data["session"]),
        actor=str(data["actor"]),
        client_seq=data["client_seq"],
        type=data["type"],
        payload=data["payload"],
        ts=int(data["ts"]),
    )


def event_frame(session: str, event: Event, ack: tuple[str, int] | None = None) -> dict:
    return {
        "v": PROTOCOL_VERSION,
        "session": session,
        "seq": event.seq,
        "event": event_to_dict(event),
        "ack": {"actor": ack[0], "client_seq": ack[1]} if ack else None,
    }


def ack_frame(session: str, actor: str, client_seq: int, seq: int, duplicate: bool = False) -> dict:
    return {
        "v": PROTOCOL_VERSION,
        "session": session,
        "ack": {"actor": actor, "client_seq": client_seq},
        "seq": seq,
        "duplicate": duplicate,
    }


def error_frame(
    code: str,
    message: str,
    session: str | None = None,
    ack: tuple[str, int] | None = None,
) -> dict:
    frame: dict[str, Any] = {"v": PROTOCOL_VERSION, "error": code, "message": message}
    if session is not None:
        frame["session"] = session
    if ack is not None:
        frame["ack"] = {"actor": ack[0], "client_seq": ack[1]}
    return frame
