"""HTTP API around sessions, for the companion UI and scripted clients.

Every mutating endpoint returns the full fresh session snapshot, so
clients never derive state locally. Mutations on one session are
serialized behind a per-session lock; sessions are independent.

Error bodies are always ``{"code", "message", "field"?}`` with status
404 (unknown id), 409 (mutation on a terminated session), 413 (corpus
upload too large), or 422 (validation).

Environment: LOOPSUM_BIND / LOOPSUM_PORT (serve address, default
loopback:8000), LOOPSUM_MAX_CORPUS_BYTES (upload cap, default 5 MB),
LOOPSUM_EXACT_CAP (exact-solver sentence cap, default 24).
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from .corpus import Corpus, CorpusError, corpus_from_texts
from .feedback import Feedback, FeedbackError, feedback_from_record
from .optimizer import Budget, BudgetMode, OptimizerError, ScoringMode
from .concepts import ConceptUnit
from .session import (
    Session,
    SessionConfig,
    SessionError,
    display_score,
    mark_satisfied,
    next_queries,
    start_session,
    submit_feedback,
    summary_structured,
    summary_text,
)

DEFAULT_MAX_CORPUS_BYTES = 5 * 1024 * 1024


@dataclass(frozen=True)
class Settings:
    host: str = "127.0.0.1"
    port: int = 8000
    max_corpus_bytes: int = DEFAULT_MAX_CORPUS_BYTES
    exact_cap: int = 24

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            host=os.environ.get("LOOPSUM_BIND", "127.0.0.1"),
            port=int(os.environ.get("LOOPSUM_PORT", "8000")),
            max_corpus_bytes=int(
                os.environ.get(
                    "LOOPSUM_MAX_CORPUS_BYTES", str(DEFAULT_MAX_CORPUS_BYTES)
                )
            ),
            exact_cap=int(os.environ.get("LOOPSUM_EXACT_CAP", "24")),
        )


def _error(status: int, code: str, message: str,
           field: str | None = None) -> JSONResponse:
    body: dict = {"code": code, "message": message}
    if field is not None:
        body["field"] = field
    return JSONResponse(status_code=status, content=body)


class _ApiError(Exception):
    def __init__(self, status: int, code: str, message: str,
                 field: str | None = None) -> None:
        super().__init__(message)
        self.response = _error(status, code, message, field)


def _parse_documents(raw: bytes, content_type: str) -> tuple[str | None, list]:
    """Accept a JSON {documents: [...]} body or raw jsonl lines."""
    text = raw.decode("utf-8", errors="strict")
    if "json" in content_type and "ndjson" not in content_type:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise _ApiError(422, "invalid_json", f"body is not valid json: {exc.msg}")
        if isinstance(obj, dict) and isinstance(obj.get("documents"), list):
            return obj.get("cluster_id"), obj["documents"]
        raise _ApiError(
            422, "invalid_corpus", "expected {documents: [...]}", field="documents"
        )
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise _ApiError(
                422, "invalid_json", f"line {lineno}: {exc.msg}"
            )
    return None, records


def _records_to_pairs(records: list) -> list[tuple[str, str]]:
    pairs = []
    for i, rec in enumerate(records):
        if not isinstance(rec, dict):
            raise _ApiError(
                422, "invalid_corpus", f"documents[{i}] is not an object",
                field=f"documents[{i}]",
            )
        doc_id = rec.get("doc_id")
        text = rec.get("text")
        if not isinstance(doc_id, str) or not doc_id:
            raise _ApiError(
                422, "invalid_corpus", f"documents[{i}] missing doc_id",
                field=f"documents[{i}].doc_id",
            )
        if not isinstance(text, str) or not text.strip():
            raise _ApiError(
                422, "invalid_corpus", f"documents[{i}] missing text",
                field=f"documents[{i}].text",
            )
        pairs.append((doc_id, text))
    return pairs


def _parse_config(record: dict, exact_cap: int) -> SessionConfig:
    budget = record.get("budget")
    if not isinstance(budget, dict):
        raise _ApiError(422, "invalid_config", "config.budget is required",
                        field="config.budget")
    try:
        mode = BudgetMode(budget.get("mode", "words"))
    except ValueError:
        raise _ApiError(422, "invalid_config",
                        f"unknown budget mode {budget.get('mode')!r}",
                        field="config.budget.mode")
    limit = budget.get("limit")
    if not isinstance(limit, int) or isinstance(limit, bool) or limit < 1:
        raise _ApiError(422, "invalid_config",
                        "budget limit must be a positive integer",
                        field="config.budget.limit")
    try:
        unit = ConceptUnit(record.get("unit", "unigram"))
    except ValueError:
        raise _ApiError(422, "invalid_config",
                        f"unknown unit {record.get('unit')!r}", field="config.unit")
    try:
        scoring = ScoringMode(record.get("scoring", "coverage"))
    except ValueError:
        raise _ApiError(422, "invalid_config",
                        f"unknown scoring {record.get('scoring')!r}",
                        field="config.scoring")
    try:
        return SessionConfig(
            budget=Budget(mode=mode, limit=limit),
            unit=unit,
            scoring=scoring,
            query_batch_size=int(record.get("query_batch_size", 10)),
            max_iterations=int(record.get("max_iterations", 10)),
            grouping_threshold=float(record.get("grouping_threshold", 0.7)),
            exact_cap=int(record.get("exact_cap", exact_cap)),
        )
    except (SessionError, OptimizerError, ValueError, TypeError) as exc:
        raise _ApiError(422, "invalid_config", str(exc), field="config")


def create_app(settings: Settings | None = None) -> FastAPI:
    settings = settings or Settings.from_env()
    app = FastAPI(title="loopsum", docs_url=None, redoc_url=None)

    corpora: dict[str, Corpus] = {}
    sessions: dict[str, tuple[str, Session]] = {}
    locks: dict[str, threading.Lock] = {}
    store_lock = threading.Lock()

    @app.exception_handler(_ApiError)
    async def handle_api_error(request: Request, exc: _ApiError) -> Response:
        return exc.response

    def get_session(session_id: str) -> tuple[str, Session]:
        entry = sessions.get(session_id)
        if entry is None:
            raise _ApiError(404, "not_found",
                            f"unknown session {session_id!r}")
        return entry

    def query_payload(session: Session, k: int | None = None) -> list[dict]:
        if session.terminated:
            return []
        return [
            {
                "concept": item.concept_key,
                "unit": item.unit.value,
                "occurrence_count": item.occurrence_count,
                "best_sent_id": item.best_sent_id,
                "group": [
                    {
                        "sent_id": sid,
                        "text": session.corpus.sentence(sid).text,
                    }
                    for sid in item.group_sent_ids
                ],
            }
            for item in next_queries(session, k)
        ]

    def snapshot(corpus_id: str, session: Session) -> dict:
        sel = session.current_selection
        return {
            "session_id": session.session_id,
            "corpus_id": corpus_id,
            "cluster_id": session.corpus.cluster_id,
            "iteration": session.iteration,
            "terminated": session.terminated,
            "termination_reason": (
                session.termination_reason.value
                if session.termination_reason else None
            ),
            "unit": session.config.unit.value,
            "scoring": session.config.scoring.value,
            "budget": {
                "mode": session.config.budget.mode.value,
                "limit": session.config.budget.limit,
            },
            "score": display_score(session),
            "raw_score": sel.score,
            "used_budget": sel.used_budget,
            "num_sentences": session.corpus.num_sentences,
            "num_concepts": session.index.num_concepts,
            "summary": [
                {
                    "sent_id": sid,
                    "doc_id": session.corpus.sentence(sid).doc_id,
                    "text": session.corpus.sentence(sid).text,
                    "group_sent_ids": list(session.groups.members(sid)),
                }
                for sid in sorted(sel.sent_ids)
            ],
            "pending_queries": query_payload(session),
        }

    @app.post("/corpora")
    async def create_corpus(request: Request) -> Response:
        raw = await request.body()
        if len(raw) > settings.max_corpus_bytes:
            return _error(
                413, "too_large",
                f"corpus exceeds {settings.max_corpus_bytes} bytes",
            )
        try:
            cluster_id, records = _parse_documents(
                raw, request.headers.get("content-type", "")
            )
        except UnicodeDecodeError:
            return _error(422, "invalid_encoding", "body is not utf-8")
        pairs = _records_to_pairs(records)
        if not pairs:
            return _error(422, "invalid_corpus", "no documents given",
                          field="documents")
        corpus_id = uuid.uuid4().hex[:12]
        try:
            corpus = corpus_from_texts(cluster_id or corpus_id, pairs)
        except CorpusError as exc:
            return _error(422, "invalid_corpus", str(exc))
        with store_lock:
            corpora[corpus_id] = corpus
        return JSONResponse(
            status_code=201,
            content={
                "corpus_id": corpus_id,
                "cluster_id": corpus.cluster_id,
                "num_documents": len(corpus.documents),
                "num_sentences": corpus.num_sentences,
            },
        )

    @app.post("/sessions")
    async def create_session(request: Request) -> Response:
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error(422, "invalid_json", f"body is not valid json: {exc.msg}")
        if not isinstance(body, dict):
            return _error(422, "invalid_request", "expected a json object")
        corpus_id = body.get("corpus_id")
        if not isinstance(corpus_id, str):
            return _error(422, "invalid_request", "corpus_id is required",
                          field="corpus_id")
        corpus = corpora.get(corpus_id)
        if corpus is None:
            return _error(404, "not_found", f"unknown corpus {corpus_id!r}")
        config_record = body.get("config", {})
        if not isinstance(config_record, dict):
            return _error(422, "invalid_config", "config must be an object",
                          field="config")
        config = _parse_config(config_record, settings.exact_cap)
        session = start_session(corpus, config)
        with store_lock:
            sessions[session.session_id] = (corpus_id, session)
            locks[session.session_id] = threading.Lock()
        return JSONResponse(
            status_code=201, content=snapshot(corpus_id, session)
        )

    @app.get("/sessions/{session_id}")
    async def get_snapshot(session_id: str) -> Response:
        corpus_id, session = get_session(session_id)
        return JSONResponse(content=snapshot(corpus_id, session))

    @app.get("/sessions/{session_id}/queries")
    async def get_queries(session_id: str, k: int | None = None) -> Response:
        _, session = get_session(session_id)
        if k is not None and k < 1:
            return _error(422, "invalid_request", "k must be >= 1", field="k")
        return JSONResponse(
            content={
                "session_id": session_id,
                "terminated": session.terminated,
                "queries": query_payload(session, k),
            }
        )

    @app.post("/sessions/{session_id}/feedback")
    async def post_feedback(session_id: str, request: Request) -> Response:
        corpus_id, _ = get_session(session_id)
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error(422, "invalid_json", f"body is not valid json: {exc.msg}")
        if not isinstance(body, dict):
            return _error(422, "invalid_request", "expected a json object")
        raw_batch = body.get("batch", [])
        if not isinstance(raw_batch, list):
            return _error(422, "invalid_request", "batch must be a list",
                          field="batch")
        rejects = body.get("reject_sentences", [])
        if not isinstance(rejects, list) or not all(
            isinstance(s, int) and not isinstance(s, bool) for s in rejects
        ):
            return _error(422, "invalid_request",
                          "reject_sentences must be a list of sentence ids",
                          field="reject_sentences")
        batch: list[Feedback] = []
        for i, record in enumerate(raw_batch):
            if not isinstance(record, dict):
                return _error(422, "invalid_feedback",
                              f"batch[{i}] is not an object", field=f"batch[{i}]")
            try:
                batch.append(feedback_from_record(record))
            except FeedbackError as exc:
                return _error(422, "invalid_feedback", str(exc),
                              field=f"batch[{i}]")
        with locks[session_id]:
            _, session = get_session(session_id)
            if session.terminated:
                return _error(409, "terminated", "session is terminated")
            try:
                session = submit_feedback(session, batch, rejects)
            except (FeedbackError, SessionError) as exc:
                return _error(422, "invalid_feedback", str(exc))
            sessions[session_id] = (corpus_id, session)
        return JSONResponse(content=snapshot(corpus_id, session))

    @app.post("/sessions/{session_id}/satisfied")
    async def post_satisfied(session_id: str) -> Response:
        corpus_id, _ = get_session(session_id)
        with locks[session_id]:
            _, session = get_session(session_id)
            session = mark_satisfied(session)
            sessions[session_id] = (corpus_id, session)
        return JSONResponse(content=snapshot(corpus_id, session))

    @app.get("/sessions/{session_id}/export")
    async def export(session_id: str, format: str = "text") -> Response:
        _, session = get_session(session_id)
        if format == "text":
            return PlainTextResponse(summary_text(session))
        if format == "structured":
            return JSONResponse(content=summary_structured(session))
        return _error(422, "invalid_request",
                      f"unknown export format {format!r}", field="format")

    return app


def serve(settings: Settings | None = None) -> None:
    """Run the API under uvicorn (blocking)."""
    import uvicorn

    settings = settings or Settings.from_env()
    uvicorn.run(create_app(settings), host=settings.host, port=settings.port)
