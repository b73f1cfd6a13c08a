"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class CreateSessionRequest(BaseModel):
    title: str
    tables: int
    rotation_minutes: int = 20
    areas: list[str] | None = None
    privacy: dict[str, Any] | None = None  # {"kind": "public"} | {"kind": "restricted", "group": [...]}
    recency_threshold_seconds: int = 300
    emoticons: list[str] | None = None
    session_id: str | None = None


class SessionSummary(BaseModel):
    session_id: str
    title: str
    organizer: str
    tables: int
    open_tables: list[int]
    archived: bool
    last_seq: int
    privacy: dict[str, Any]


class CommandRequest(BaseModel):
    type: str
    payload: dict[str, Any] = Field(default_factory=dict)
    client_seq: int | None = None
    ts: int | None = None


class AckResponse(BaseModel):
    seq: int
    duplicate: bool


class PanelistIn(BaseModel):
    id: str
    category: str


class StatementIn(BaseModel):
    id: str
    text: str


class CreateProcessRequest(BaseModel):
    title: str
    panel: list[PanelistIn]
    process_id: str | None = None
    statements: list[StatementIn] | None = None  # when given, round 1 opens immediately
    scale_max: int = 9


class OpenRoundRequest(BaseModel):
    statements: list[StatementIn]
    panel: list[PanelistIn] | None = None
    scale_max: int = 9


class OfflineStepRequest(BaseModel):
    description: str


class SubmitResponseRequest(BaseModel):
    panelist: str
    statement: str
    rating: int
    comment: str | None = None


class ClassifyRequest(BaseModel):
    features: list[str]


class ComposeRequest(BaseModel):
    paradigms: list[str]


class CatalogEntryIn(BaseModel):
    id: str
    kind: str
    functions: list[str] = Field(default_factory=list)
    references: list[str] = Field(default_factory=list)


class ValidateRequest(BaseModel):
    entries: list[CatalogEntryIn]


class DocumentIn(BaseModel):
    id: str
    text: str


class KeywordsRequest(BaseModel):
    documents: list[DocumentIn]
    doc: str
    k: int = 10


class TextRequest(BaseModel):
    text: str


class RecommendRequest(BaseModel):
    profile: dict[str, float]
    items: list[dict[str, Any]]  # [{"id": ..., "vector": {token: weight}}]
    k: int = 10
    min_score: float | None = None


class ErrorBody(BaseModel):
    error: str
    message: str
