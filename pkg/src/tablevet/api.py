"""HTTP surface under /api/v1: the contract the viewer UI consumes.

External-service degradation is represented inside the report body (group
state "unavailable"), never as a failed request. No endpoint mutates table
or snippet documents; adjustments touch only per-consumer state.
"""

from __future__ import annotations

import threading
from datetime import datetime, timezone

from fastapi import Body, FastAPI, Header, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware

from .appraisal import (
    InvalidDomain,
    InvalidThreshold,
    UnknownIssue,
    Whitelist,
    apply_adjustment,
)
from .codec import DecodeError, parse_ts
from .domains import normalize_whitelist_entry
from .service import ServiceConfig, build_report, gather_inputs
from .session import NowBeforeData
from .store import DocumentStore, TableNotFound

import dataclasses


def create_app(config: ServiceConfig, ui_origin: str = "*") -> FastAPI:
    app = FastAPI(title="tablevet", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[ui_origin] if ui_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = DocumentStore(config.store_path)
    consumer_locks: dict[str, threading.Lock] = {}
    locks_guard = threading.Lock()

    def lock_for(consumer_id: str) -> threading.Lock:
        with locks_guard:
            return consumer_locks.setdefault(consumer_id, threading.Lock())

    def resolve_now(raw: str | None) -> datetime:
        if raw is None:
            return datetime.now(timezone.utc)
        try:
            return parse_ts(raw)
        except DecodeError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    def consumer_or_default(header_value: str | None) -> str:
        return header_value or "anonymous"

    def require_consumer(header_value: str | None) -> str:
        if not header_value:
            raise HTTPException(status_code=401,
                                detail="X-Consumer-Id header required")
        return header_value

    def report_or_error(table_id: str, consumer_id: str, now: datetime):
        state = store.load_consumer(consumer_id)
        try:
            return build_report(store, table_id, state, now, config)
        except TableNotFound:
            raise HTTPException(status_code=404, detail=f"unknown table {table_id}")
        except NowBeforeData as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/api/v1/tables")
    def list_tables():
        out = []
        for table_id in store.list_table_ids():
            table = store.load_table(table_id)
            out.append({"id": table.id, "title": table.title})
        return {"tables": out}

    @app.get("/api/v1/tables/{table_id}/report")
    def get_report(table_id: str, now: str | None = Query(default=None),
                   x_consumer_id: str | None = Header(default=None)):
        report = report_or_error(
            table_id, consumer_or_default(x_consumer_id), resolve_now(now))
        return report.to_dict()

    @app.get("/api/v1/tables/{table_id}/timeline")
    def get_timeline(table_id: str, now: str | None = Query(default=None),
                     x_consumer_id: str | None = Header(default=None)):
        report = report_or_error(
            table_id, consumer_or_default(x_consumer_id), resolve_now(now))
        process = report.thoroughness.groups[0]
        return {"state": process.state, "timeline": process.data.get("timeline")}

    @app.get("/api/v1/tables/{table_id}/alternatives")
    def get_alternatives(table_id: str, now: str | None = Query(default=None),
                         x_consumer_id: str | None = Header(default=None)):
        report = report_or_error(
            table_id, consumer_or_default(x_consumer_id), resolve_now(now))
        group = report.thoroughness.groups[1]
        return {"state": group.state, "alternatives": group.data.get("alternatives", [])}

    @app.get("/api/v1/tables/{table_id}/snippets/{snippet_id}/snapshot")
    def get_snapshot(table_id: str, snippet_id: str):
        try:
            snippets = store.load_snippets(table_id)
            store.load_table(table_id)
        except TableNotFound:
            raise HTTPException(status_code=404, detail=f"unknown table {table_id}")
        snippet = snippets.get(snippet_id)
        if snippet is None:
            raise HTTPException(status_code=404, detail=f"unknown snippet {snippet_id}")
        if snippet.context_snapshot is None:
            raise HTTPException(status_code=404,
                                detail=f"snippet {snippet_id} has no context snapshot")
        snap = snippet.context_snapshot
        return {
            "snippet_id": snippet_id,
            "surroundings": snap.surroundings,
            "highlight": {"start": snap.highlight_start, "end": snap.highlight_end},
            "includes_question_block": snap.includes_question_block,
        }

    @app.get("/api/v1/consumer/whitelist")
    def get_whitelist(x_consumer_id: str | None = Header(default=None)):
        state = store.load_consumer(consumer_or_default(x_consumer_id))
        return {"domains": state.whitelist.sorted_domains(),
                "source": state.whitelist.source}

    @app.put("/api/v1/consumer/whitelist")
    def put_whitelist(payload: dict = Body(...),
                      x_consumer_id: str | None = Header(default=None)):
        consumer_id = require_consumer(x_consumer_id)
        domains_raw = payload.get("domains")
        if not isinstance(domains_raw, list):
            raise HTTPException(status_code=400,
                                detail="body must carry a 'domains' list")
        try:
            domains = frozenset(normalize_whitelist_entry(d) for d in domains_raw)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with lock_for(consumer_id):
            state = store.load_consumer(consumer_id)
            state = dataclasses.replace(
                state, whitelist=Whitelist(domains, "user-edited"))
            store.save_consumer(consumer_id, state)
        return {"domains": state.whitelist.sorted_domains(),
                "source": state.whitelist.source}

    @app.post("/api/v1/consumer/adjustments")
    def post_adjustment(payload: dict = Body(...),
                        x_consumer_id: str | None = Header(default=None)):
        consumer_id = require_consumer(x_consumer_id)
        table_id = payload.get("table_id")
        if not table_id:
            raise HTTPException(status_code=400, detail="table_id required")
        now = resolve_now(payload.get("now"))
        with lock_for(consumer_id):
            state = store.load_consumer(consumer_id)
            try:
                inputs = gather_inputs(store, table_id, now, config)
                new_state, report = apply_adjustment(state, payload, inputs)
            except TableNotFound:
                raise HTTPException(status_code=404,
                                    detail=f"unknown table {table_id}")
            except UnknownIssue as exc:
                raise HTTPException(status_code=404,
                                    detail=f"unknown issue {exc.args[0]}")
            except (InvalidDomain, InvalidThreshold, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            except NowBeforeData as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            store.save_consumer(consumer_id, new_state)
        return {"consumer": new_state.to_dict(), "report": report.to_dict()}

    return app
