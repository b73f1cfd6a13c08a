"""FastAPI host wrapping the engine.

REST endpoints mirror module operations one-to-one; the live wire protocol
runs over /ws/{session_id} (one single-line JSON envelope per message).
"""

from __future__ import annotations

import asyncio
import contextlib
import logging
from pathlib import Path

from fastapi import Depends, FastAPI, Header, Query, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, PlainTextResponse

from scicafe import __version__
from scicafe.catalog import (
    CatalogEntry,
    SubFunction,
    ToolKind,
    classify,
    compose,
    load_catalog,
    validate_entry,
)
from scicafe.core import build_archive
from scicafe.core.commands import privacy_from_payload
from scicafe.core.model import SessionConfig
from scicafe.delphi import (
    Panelist,
    Statement,
    export_recommendations,
    finish,
    new_process,
    open_round,
    process_aggregate,
    process_carry_forward,
    process_close_round,
    process_submit,
    record_offline_step,
    stats_csv,
)
from scicafe.errors import DomainError
from scicafe.knowledge import (
    Document,
    FixtureRepositoryClient,
    HttpRepositoryClient,
    annotate,
    extract_keywords,
    load_gazetteer,
    moderation_alerts,
    recognize_entities,
    recommend,
    session_metrics,
)
from scicafe.service import codec, protocol
from scicafe.service.auth import resolver_for
from scicafe.service.clock import Clock, WallClock
from scicafe.service.config import ServiceConfig
from scicafe.service.hub import SessionHub
from scicafe.service.registry import DelphiRegistry
from scicafe.service.schemas import (
    AckResponse,
    ClassifyRequest,
    CommandRequest,
    ComposeRequest,
    CreateProcessRequest,
    CreateSessionRequest,
    KeywordsRequest,
    OfflineStepRequest,
    OpenRoundRequest,
    RecommendRequest,
    SessionSummary,
    SubmitResponseRequest,
    TextRequest,
    ValidateRequest,
)
from scicafe.service.storage import SessionStorage

log = logging.getLogger(__name__)

_STATUS_BY_CODE = {
    "AUTH_FAILURE": 401,
    "UNAUTHORIZED": 403,
    "NOT_AUTHORIZED": 403,
    "NOT_ENROLLED": 403,
    "REPOSITORY_UNAVAILABLE": 503,
}


def _status_for(code: str) -> int:
    if code in _STATUS_BY_CODE:
        return _STATUS_BY_CODE[code]
    if code.startswith("UNKNOWN_"):
        return 404
    if code in {
        "SESSION_ARCHIVED",
        "TABLES_STILL_OPEN",
        "TABLE_NOT_OPEN",
        "INVARIANT_VIOLATION",
        "NO_OPEN_TABLES",
        "SESSION_EXISTS",
        "READ_ONLY",
        "STEP_ORDER_VIOLATION",
        "ROUND_CLOSED",
        "ROUND_STILL_OPEN",
        "UNRATED_STATEMENT",
        "NOTHING_TO_CARRY",
        "PROCESS_INCOMPLETE",
    }:
        return 409
    return 400


def create_app(
    config: ServiceConfig | None = None,
    clock: Clock | None = None,
    hub: SessionHub | None = None,
) -> FastAPI:
    config = config or ServiceConfig()
    clock = clock or WallClock()
    storage = SessionStorage(config.storage_dir, snapshot_interval=config.snapshot_interval)
    hub = hub or SessionHub(storage, clock=clock)
    registry = DelphiRegistry(Path(config.storage_dir) / "delphi")
    resolver = resolver_for(config.tokens)
    catalog = load_catalog()
    gazetteer = load_gazetteer(config.gazetteer_path) if config.gazetteer_path else {}
    repo_client = None
    if config.repository_mode == "fixture" and config.repository_fixture:
        repo_client = FixtureRepositoryClient.from_file(config.repository_fixture)
    elif config.repository_mode == "live" and config.repository_endpoint:
        repo_client = HttpRepositoryClient(
            config.repository_endpoint,
            timeout=config.repository_timeout,
            strict=config.repository_strict,
            cache_ttl=config.repository_cache_ttl,
        )

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        ticker_task = None
        if config.rotation_tick_seconds > 0:

            async def ticker():
                while True:
                    try:
                        hub.tick()
                    except Exception:
                        log.exception("rotation tick failed")
                    await asyncio.sleep(config.rotation_tick_seconds)

            ticker_task = asyncio.create_task(ticker())
        try:
            yield
        finally:
            if ticker_task is not None:
                ticker_task.cancel()
                with contextlib.suppress(asyncio.CancelledError):
                    await ticker_task

    app = FastAPI(title="scicafe", version=__version__, lifespan=lifespan)
    app.state.config = config
    app.state.clock = clock
    app.state.hub = hub
    app.state.registry = registry
    app.state.catalog = catalog
    app.state.gazetteer = gazetteer
    app.state.repo_client = repo_client

    @app.exception_handler(DomainError)
    async def domain_error_handler(request: Request, exc: DomainError):
        return JSONResponse(
            status_code=_status_for(exc.code),
            content={"error": exc.code, "message": exc.message},
        )

    @app.exception_handler(protocol.ProtocolError)
    async def protocol_error_handler(request: Request, exc: protocol.ProtocolError):
        return JSONResponse(
            status_code=_status_for(exc.code),
            content={"error": exc.code, "message": exc.message},
        )

    def current_actor(
        authorization: str | None = Header(default=None),
        token: str | None = Query(default=None),
    ) -> str:
        raw = token
        if raw is None and authorization and authorization.lower().startswith("bearer "):
            raw = authorization[7:]
        user = resolver.resolve(raw)
        if user is None:
            raise protocol.ProtocolError(protocol.AUTH_FAILURE, "missing or unknown token")
        return user

    def _member_state(session_id: str, user: str):
        state = hub.state_of(session_id)
        if not hub.is_member(state, user):
            raise protocol.ProtocolError(
                protocol.NOT_AUTHORIZED, f"{user} is not in the authorized audience"
            )
        return state

    # --- health ---

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    if config.ui_dir and Path(config.ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    # --- sessions ---

    def _summary(state) -> SessionSummary:
        return SessionSummary(
            session_id=state.session_id,
            title=state.config.title,
            organizer=state.organizer,
            tables=len(state.tables),
            open_tables=state.open_table_ids(),
            archived=state.archived,
            last_seq=state.last_seq,
            privacy=codec.privacy_to_dict(state.config.privacy),
        )

    @app.post("/sessions", response_model=SessionSummary, status_code=201)
    def create_session_endpoint(
        body: CreateSessionRequest, user: str = Depends(current_actor)
    ):
        privacy = privacy_from_payload(body.privacy) if body.privacy else None
        config_kwargs = dict(
            title=body.title,
            table_count=body.tables,
            rotation_minutes=body.rotation_minutes,
            recency_threshold_seconds=body.recency_threshold_seconds,
        )
        if body.areas is not None:
            config_kwargs["areas"] = tuple(body.areas)
        if privacy is not None:
            config_kwargs["privacy"] = privacy
        if body.emoticons is not None:
            config_kwargs["emoticons"] = tuple(body.emoticons)
        session_config = SessionConfig(**config_kwargs)
        session_id, state = hub.create_session(
            session_config, organizer=user, session_id=body.session_id
        )
        return _summary(state)

    @app.get("/sessions")
    def list_sessions(user: str = Depends(current_actor)):
        return {"sessions": [_summary(s).model_dump() for s in hub.list_sessions()]}

    @app.get("/sessions/{session_id}", response_model=SessionSummary)
    def get_session(session_id: str, user: str = Depends(current_actor)):
        return _summary(_member_state(session_id, user))

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str, user: str = Depends(current_actor)):
        return codec.state_to_dict(_member_state(session_id, user))

    @app.get("/sessions/{session_id}/events")
    def get_events(
        session_id: str,
        since: int = Query(default=0, ge=0),
        user: str = Depends(current_actor),
    ):
        _member_state(session_id, user)
        events = hub.events_since(session_id, since=since)
        return {"events": [codec.event_to_dict(e) for e in events]}

    @app.post("/sessions/{session_id}/commands", response_model=AckResponse)
    def post_command(
        session_id: str, body: CommandRequest, user: str = Depends(current_actor)
    ):
        envelope = protocol.parse_command_envelope(
            {
                "v": protocol.PROTOCOL_VERSION,
                "session": session_id,
                "actor": user,
                "client_seq": body.client_seq if body.client_seq is not None else -1,
                "type": body.type,
                "payload": body.payload,
                "ts": body.ts if body.ts is not None else clock.now_ms(),
            }
        )
        result = hub.ingest(
            session_id, user, body.client_seq, envelope.command()
        )
        return AckResponse(seq=result.seq, duplicate=result.duplicate)

    @app.get("/sessions/{session_id}/archive")
    def get_archive(session_id: str, user: str = Depends(current_actor)):
        state = _member_state(session_id, user)
        return codec.archive_to_dict(build_archive(state))

    @app.get("/sessions/{session_id}/metrics")
    def get_metrics(session_id: str, user: str = Depends(current_actor)):
        _member_state(session_id, user)
        summary = session_metrics(hub.events_since(session_id))
        return {
            "session_id": summary.session_id,
            "per_user_notes": summary.per_user_notes,
            "per_user_chats": summary.per_user_chats,
            "total_notes": summary.total_notes,
            "notes_per_area": summary.notes_per_area,
            "entropy_nats": summary.entropy_nats,
            "rotation_rounds": summary.rotation_rounds,
            "distinct_contributors": summary.distinct_contributors,
        }

    @app.get("/sessions/{session_id}/alerts")
    def get_alerts(
        session_id: str,
        threshold_seconds: int = Query(default=60, gt=0),
        user: str = Depends(current_actor),
    ):
        _member_state(session_id, user)
        alerts = moderation_alerts(
            hub.events_since(session_id), now=clock.now_ms(), threshold_seconds=threshold_seconds
        )
        return {
            "alerts": [
                {
                    "message_id": a.message_id,
                    "table": a.table,
                    "origin": a.origin,
                    "waited_seconds": a.waited_seconds,
                    "raised_at": a.raised_at,
                }
                for a in alerts
            ]
        }

    # --- live wire protocol ---

    @app.websocket("/ws/{session_id}")
    async def websocket_endpoint(
        websocket: WebSocket,
        session_id: str,
        token: str | None = Query(default=None),
        since: int = Query(default=0, ge=0),
    ):
        await websocket.accept()
        user = resolver.resolve(token)
        if user is None:
            await websocket.send_text(
                codec.dumps_line(
                    protocol.error_frame(protocol.AUTH_FAILURE, "missing or unknown token")
                )
            )
            await websocket.close()
            return
        loop = asyncio.get_running_loop()
        queue: asyncio.Queue[dict] = asyncio.Queue()

        def sink(frame: dict) -> None:
            loop.call_soon_threadsafe(queue.put_nowait, frame)

        try:
            sub_id = hub.subscribe(session_id, user, sink, since=since)
        except (protocol.ProtocolError, DomainError) as exc:
            code = getattr(exc, "code", "ERROR")
            await websocket.send_text(
                codec.dumps_line(protocol.error_frame(code, str(exc), session=session_id))
            )
            await websocket.close()
            return

        async def sender():
            while True:
                frame = await queue.get()
                await websocket.send_text(codec.dumps_line(frame))

        send_task = asyncio.create_task(sender())
        try:
            while True:
                line = await websocket.receive_text()
                _handle_ws_command(hub, user, line, sink)
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await send_task
            hub.unsubscribe(session_id, sub_id)

    def _handle_ws_command(hub: SessionHub, user: str, line: str, sink) -> None:
        ack = None
        try:
            envelope = protocol.parse_command_envelope(line)
            ack = (envelope.actor, envelope.client_seq)
            if envelope.actor != user:
                raise protocol.ProtocolError(
                    protocol.AUTH_FAILURE, "envelope actor does not match the connection"
                )
            result = hub.ingest(
                envelope.session, user, envelope.client_seq, envelope.command()
            )
            if result.duplicate:
                sink(
                    protocol.ack_frame(
                        envelope.session, user, envelope.client_seq, result.seq, duplicate=True
                    )
                )
        except protocol.ProtocolError as exc:
            sink(protocol.error_frame(exc.code, exc.message, ack=ack))
        except DomainError as exc:
            sink(protocol.error_frame(exc.code, exc.message, ack=ack))

    # --- delphi ---

    def _stats_payload(stats) -> dict:
        return {
            sid: {
                **codec.stats_to_dict(s),
                "median_value": float(s.median),
                "iqr_value": float(s.iqr),
                "agreement_value": float(s.agreement_ratio),
            }
            for sid, s in stats.items()
        }

    def _process_payload(process) -> dict:
        return codec.process_to_dict(process)

    @app.post("/delphi", status_code=201)
    def create_process(body: CreateProcessRequest, user: str = Depends(current_actor)):
        process_id = body.process_id or registry.new_id()
        if registry.exists(process_id):
            raise protocol.ProtocolError("SESSION_EXISTS", f"process {process_id} exists")
        panel = [Panelist(id=p.id, category=p.category) for p in body.panel]
        process = new_process(process_id, body.title, panel)
        if body.statements:
            statements = [Statement(id=s.id, text=s.text) for s in body.statements]
            process, _ = open_round(process, statements, scale_max=body.scale_max)
        registry.put(process)
        return _process_payload(process)

    @app.get("/delphi")
    def list_processes(user: str = Depends(current_actor)):
        return {
            "processes": [
                {"id": p.id, "title": p.title, "status": p.status, "rounds": len(p.rounds())}
                for p in registry.list()
            ]
        }

    @app.get("/delphi/{process_id}")
    def get_process(process_id: str, user: str = Depends(current_actor)):
        return _process_payload(registry.get(process_id))

    @app.post("/delphi/{process_id}/offline")
    def post_offline_step(
        process_id: str, body: OfflineStepRequest, user: str = Depends(current_actor)
    ):
        process = record_offline_step(
            registry.get(process_id), body.description, completed_at=clock.now_ms()
        )
        registry.put(process)
        return _process_payload(process)

    @app.post("/delphi/{process_id}/rounds", status_code=201)
    def post_round(
        process_id: str, body: OpenRoundRequest, user: str = Depends(current_actor)
    ):
        process = registry.get(process_id)
        statements = [Statement(id=s.id, text=s.text) for s in body.statements]
        panel = (
            [Panelist(id=p.id, category=p.category) for p in body.panel]
            if body.panel is not None
            else None
        )
        process, round_ = open_round(process, statements, panel, scale_max=body.scale_max)
        registry.put(process)
        return {"round_id": round_.id, "statements": len(round_.statements)}

    @app.post("/delphi/{process_id}/responses")
    def post_response(
        process_id: str, body: SubmitResponseRequest, user: str = Depends(current_actor)
    ):
        process = process_submit(
            registry.get(process_id), body.panelist, body.statement, body.rating, body.comment
        )
        registry.put(process)
        step = process.current_round_step()
        response = step.round.responses[(body.panelist, body.statement)]
        return {"rating": response.rating, "revision": response.revision}

    @app.post("/delphi/{process_id}/close")
    def post_close(process_id: str, user: str = Depends(current_actor)):
        process = process_close_round(registry.get(process_id))
        registry.put(process)
        return {"round_id": process.current_round_step().round.id, "status": "closed"}

    @app.post("/delphi/{process_id}/aggregate")
    def post_aggregate(
        process_id: str,
        close_first: bool = Query(default=False),
        format: str = Query(default="json"),
        user: str = Depends(current_actor),
    ):
        process = registry.get(process_id)
        if close_first and process.current_round_step() is not None:
            step = process.current_round_step()
            if step.round.status == "open":
                process = process_close_round(process)
        process, stats = process_aggregate(process)
        registry.put(process)
        if format == "csv":
            return PlainTextResponse(stats_csv(stats), media_type="text/csv")
        return {"round_id": process.current_round_step().round.id, "stats": _stats_payload(stats)}

    @app.post("/delphi/{process_id}/carry-forward")
    def post_carry_forward(process_id: str, user: str = Depends(current_actor)):
        process, round_ = process_carry_forward(registry.get(process_id))
        registry.put(process)
        return {
            "round_id": round_.id,
            "statements": [s.id for s in round_.statements],
        }

    @app.post("/delphi/{process_id}/finish")
    def post_finish(process_id: str, user: str = Depends(current_actor)):
        process = finish(registry.get(process_id))
        registry.put(process)
        return {"id": process.id, "status": process.status}

    @app.get("/delphi/{process_id}/recommendations")
    def get_recommendations(process_id: str, user: str = Depends(current_actor)):
        recommendations = export_recommendations(registry.get(process_id))
        return {
            "recommendations": [
                {
                    "statement": statement.id,
                    "text": statement.text,
                    **codec.stats_to_dict(stats),
                    "agreement_value": float(stats.agreement_ratio),
                    "median_value": float(stats.median),
                }
                for statement, stats in recommendations
            ]
        }

    @app.get("/delphi/{process_id}/export.csv")
    def get_export_csv(process_id: str, user: str = Depends(current_actor)):
        recommendations = export_recommendations(registry.get(process_id))
        stats_by_id = {s.id: stats for s, stats in recommendations}
        return PlainTextResponse(stats_csv(stats_by_id), media_type="text/csv")

    # --- catalog ---

    @app.get("/catalog/paradigms")
    def get_paradigms(user: str = Depends(current_actor)):
        return {
            "paradigms": [
                {
                    "id": p.id,
                    "name": p.name,
                    "signature": sorted(s.value for s in p.signature),
                }
                for p in catalog
            ]
        }

    @app.post("/catalog/classify")
    def post_classify(body: ClassifyRequest, user: str = Depends(current_actor)):
        try:
            features = {SubFunction(f) for f in body.features}
        except ValueError as exc:
            raise protocol.ProtocolError(protocol.MALFORMED, str(exc)) from exc
        profile = classify(features, catalog)
        return {
            "scores": {pid: float(score) for pid, score in sorted(profile.scores.items())},
            "dominant": list(profile.dominant),
        }

    @app.post("/catalog/compose")
    def post_compose(body: ComposeRequest, user: str = Depends(current_actor)):
        blueprint = compose(body.paradigms, catalog)
        return {"blueprint": sorted(s.value for s in blueprint)}

    @app.post("/catalog/validate")
    def post_validate(body: ValidateRequest, user: str = Depends(current_actor)):
        try:
            entries: dict[str, CatalogEntry] = {}
            for item in body.entries:
                entries[item.id] = CatalogEntry(
                    id=item.id,
                    kind=ToolKind(item.kind),
                    functions=frozenset(SubFunction(f) for f in item.functions),
                )
        except ValueError as exc:
            raise protocol.ProtocolError(protocol.MALFORMED, str(exc)) from exc
        violations = {}
        for item in body.entries:
            entry = CatalogEntry(
                id=item.id,
                kind=entries[item.id].kind,
                functions=entries[item.id].functions,
                references=tuple(entries[r] for r in item.references if r in entries),
            )
            found = validate_entry(entry)
            found += [f"unknown reference {r!r}" for r in item.references if r not in entries]
            violations[item.id] = found
        return {"violations": violations, "ok": all(not v for v in violations.values())}

    # --- knowledge ---

    @app.post("/knowledge/keywords")
    def post_keywords(body: KeywordsRequest, user: str = Depends(current_actor)):
        corpus = [Document(d.id, d.text) for d in body.documents]
        target = next((d for d in corpus if d.id == body.doc), None)
        if target is None:
            raise protocol.ProtocolError(protocol.MALFORMED, f"doc {body.doc!r} not in documents")
        ranked = extract_keywords(target, corpus, k=body.k)
        return {"keywords": [{"token": t, "weight": w} for t, w in ranked]}

    @app.post("/knowledge/entities")
    def post_entities(body: TextRequest, user: str = Depends(current_actor)):
        mentions = recognize_entities(body.text, gazetteer)
        return {
            "mentions": [
                {"surface": m.surface, "type": m.type, "start": m.start, "end": m.end}
                for m in mentions
            ]
        }

    @app.post("/knowledge/annotate")
    def post_annotate(body: TextRequest, user: str = Depends(current_actor)):
        annotated = annotate(body.text, gazetteer, repo_client)
        return {
            "text": annotated.text,
            "mentions": [
                {
                    "surface": m.surface,
                    "type": m.type,
                    "start": m.start,
                    "end": m.end,
                    "uri": m.uri,
                }
                for m in annotated.mentions
            ],
        }

    @app.post("/knowledge/recommend")
    def post_recommend(body: RecommendRequest, user: str = Depends(current_actor)):
        items = [(item["id"], item["vector"]) for item in body.items]
        ranking = recommend(body.profile, items, k=body.k, min_score=body.min_score)
        return {"ranking": [{"id": item_id, "score": score} for item_id, score in ranking]}

    return app
