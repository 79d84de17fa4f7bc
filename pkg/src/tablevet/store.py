"""Directory-backed document store.

Layout under the store root (all JSON unless noted):

    tables/<id>.json            the table document
    snippets/<id>.json          snippet store for the table (list of docs)
    sessions/<id>.log           raw session JSONL, re-ingested on load
    pages/<id>/index.json       url -> file map for captured pages
    pages/<id>/<name>.html      captured page content
    consumers/<consumer>.json   per-consumer state (whitelist, dismissals, thresholds)
    cache/<key>.json            short-lived external responses

Writes are atomic per document (temp file + rename). Consumer state is
never embedded in table documents.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import time
from pathlib import Path
from typing import Any

from .appraisal import ConsumerState
from .codec import decode_snippet_store, decode_table, encode_snippet_store, encode_table
from .model import KnowledgeTable, SnippetStore
from .session import SessionLog, ingest_session_log

SUGGESTION_CACHE_TTL = 600.0  # seconds; honors "generated on the spot" freshness


class TableNotFound(KeyError):
    pass


def _slug(value: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", value)


class DocumentStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        for sub in ("tables", "snippets", "sessions", "pages", "consumers", "cache"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    # -- atomic json -----------------------------------------------------

    def _write(self, path: Path, payload: Any) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(payload, handle, indent=2, ensure_ascii=False)
                handle.write("\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _read(self, path: Path) -> Any:
        return json.loads(path.read_text(encoding="utf-8"))

    # -- tables ------------------------------------------------------------

    def save_table(self, table: KnowledgeTable) -> None:
        self._write(self.root / "tables" / f"{_slug(table.id)}.json",
                    encode_table(table))

    def load_table(self, table_id: str) -> KnowledgeTable:
        path = self.root / "tables" / f"{_slug(table_id)}.json"
        if not path.exists():
            raise TableNotFound(table_id)
        return decode_table(self._read(path))

    def list_table_ids(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "tables").glob("*.json"))

    # -- snippets ------------------------------------------------------------

    def save_snippets(self, table_id: str, snippets: SnippetStore) -> None:
        self._write(self.root / "snippets" / f"{_slug(table_id)}.json",
                    encode_snippet_store(snippets))

    def load_snippets(self, table_id: str) -> SnippetStore:
        path = self.root / "snippets" / f"{_slug(table_id)}.json"
        if not path.exists():
            return SnippetStore()
        return decode_snippet_store(self._read(path))

    # -- session logs ---------------------------------------------------------

    def save_session(self, table_id: str, raw_jsonl: str) -> None:
        path = self.root / "sessions" / f"{_slug(table_id)}.log"
        path.write_text(raw_jsonl, encoding="utf-8")

    def load_session(self, table_id: str) -> SessionLog | None:
        path = self.root / "sessions" / f"{_slug(table_id)}.log"
        if not path.exists():
            return None
        return ingest_session_log(path.read_text(encoding="utf-8"))

    # -- captured pages ---------------------------------------------------------

    def save_pages(self, table_id: str, pages: dict[str, str]) -> None:
        base = self.root / "pages" / _slug(table_id)
        base.mkdir(parents=True, exist_ok=True)
        index = {}
        for i, (url, html) in enumerate(sorted(pages.items())):
            name = f"page{i:03d}.html"
            (base / name).write_text(html, encoding="utf-8")
            index[url] = name
        self._write(base / "index.json", index)

    def load_pages(self, table_id: str) -> dict[str, str]:
        base = self.root / "pages" / _slug(table_id)
        index_path = base / "index.json"
        if not index_path.exists():
            return {}
        index = self._read(index_path)
        pages = {}
        for url, name in index.items():
            page_path = base / name
            if page_path.exists():
                pages[url] = page_path.read_text(encoding="utf-8")
        return pages

    # -- consumer state ----------------------------------------------------------

    def load_consumer(self, consumer_id: str) -> ConsumerState:
        path = self.root / "consumers" / f"{_slug(consumer_id)}.json"
        if not path.exists():
            return ConsumerState.initial()
        return ConsumerState.from_dict(self._read(path))

    def save_consumer(self, consumer_id: str, state: ConsumerState) -> None:
        self._write(self.root / "consumers" / f"{_slug(consumer_id)}.json",
                    state.to_dict())

    # -- response cache -----------------------------------------------------------

    def cache_get(self, key: str, ttl: float = SUGGESTION_CACHE_TTL) -> Any | None:
        path = self.root / "cache" / f"{_slug(key)}.json"
        if not path.exists():
            return None
        doc = self._read(path)
        if time.time() - doc.get("fetched_at", 0) > ttl:
            return None
        return doc.get("payload")

    def cache_put(self, key: str, payload: Any) -> None:
        self._write(self.root / "cache" / f"{_slug(key)}.json",
                    {"fetched_at": time.time(), "payload": payload})
