"""JSON document schemas for the core types.

These are the persisted shapes (table.json, snippet docs); the exact field
layout is pinned by golden-file tests. decode(encode(x)) == x holds for
every core type.
"""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Any, Mapping

from .model import (
    ContextSnapshot,
    Criterion,
    CodeExample,
    DetectionResult,
    EnrichmentSignals,
    KnowledgeTable,
    Option,
    PopularitySignal,
    Rating,
    Snippet,
    SnippetStore,
)


class DecodeError(ValueError):
    """A document does not match its schema."""


def format_ts(ts: datetime) -> str:
    ts = ts.astimezone(timezone.utc).replace(tzinfo=None)
    return ts.isoformat(timespec="seconds") + "Z"


def parse_ts(value: str) -> datetime:
    """ISO-8601, 'Z' suffix allowed; naive values are taken as UTC."""
    if not isinstance(value, str):
        raise DecodeError(f"timestamp must be a string, got {value!r}")
    text = value.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError as exc:
        raise DecodeError(f"bad timestamp {value!r}") from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


# --- tables -------------------------------------------------------------


def encode_table(table: KnowledgeTable) -> dict[str, Any]:
    return {
        "id": table.id,
        "title": table.title,
        "options": [{"id": o.id, "name": o.name} for o in table.options],
        "criteria": [{"id": c.id, "name": c.name} for c in table.criteria],
        "cells": [
            {"option_id": opt_id, "criterion_id": crit_id, "snippet_ids": list(sids)}
            for (opt_id, crit_id), sids in table.cells.items()
        ],
        "author_profile_url": table.author_profile_url,
        "created_at": format_ts(table.created_at),
        "updated_at": format_ts(table.updated_at),
    }


def decode_table(doc: Mapping[str, Any]) -> KnowledgeTable:
    try:
        cells: dict[tuple[str, str], tuple[str, ...]] = {}
        for cell in doc.get("cells", []):
            key = (cell["option_id"], cell["criterion_id"])
            cells[key] = tuple(cell["snippet_ids"])
        return KnowledgeTable(
            id=doc["id"],
            title=doc["title"],
            options=tuple(Option(o["id"], o["name"]) for o in doc.get("options", [])),
            criteria=tuple(Criterion(c["id"], c["name"]) for c in doc.get("criteria", [])),
            cells=cells,
            author_profile_url=doc.get("author_profile_url"),
            created_at=parse_ts(doc["created_at"]),
            updated_at=parse_ts(doc["updated_at"]),
        )
    except (KeyError, TypeError) as exc:
        raise DecodeError(f"bad table document: {exc}") from exc


# --- snippets -----------------------------------------------------------


def encode_snippet(snippet: Snippet) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": snippet.id,
        "content": snippet.content,
        "plain_text": snippet.plain_text,
        "source_url": snippet.source_url,
        "collected_at": format_ts(snippet.collected_at),
        "rating": snippet.rating.value if snippet.rating else None,
        "context_snapshot": None,
        "enrichment": None,
    }
    if snippet.context_snapshot:
        snap = snippet.context_snapshot
        doc["context_snapshot"] = {
            "surroundings": snap.surroundings,
            "highlight_start": snap.highlight_start,
            "highlight_end": snap.highlight_end,
            "includes_question_block": snap.includes_question_block,
        }
    if snippet.enrichment:
        doc["enrichment"] = encode_enrichment(snippet.enrichment)
    return doc


def encode_enrichment(e: EnrichmentSignals) -> dict[str, Any]:
    return {
        "domain": e.domain,
        "detections": [
            {
                "detector_name": d.detector_name,
                "category": d.category,
                "matched_keyword": d.matched_keyword,
                "source": d.source,
                "version": d.version,
            }
            for d in e.detections
        ],
        "last_updated": format_ts(e.last_updated) if e.last_updated else None,
        "popularity": (
            {
                "kind": e.popularity.kind,
                "count": e.popularity.count,
                "accepted": e.popularity.accepted,
                "extracted_from": e.popularity.extracted_from,
            }
            if e.popularity else None
        ),
        "code_examples": [
            {
                "text": c.text,
                "language_hint": c.language_hint,
                "origin_snippet": c.origin_snippet,
            }
            for c in e.code_examples
        ],
    }


def decode_snippet(doc: Mapping[str, Any]) -> Snippet:
    try:
        snapshot = None
        if doc.get("context_snapshot"):
            raw = doc["context_snapshot"]
            snapshot = ContextSnapshot(
                surroundings=raw["surroundings"],
                highlight_start=raw["highlight_start"],
                highlight_end=raw["highlight_end"],
                includes_question_block=raw.get("includes_question_block", False),
            )
        enrichment = None
        if doc.get("enrichment"):
            enrichment = decode_enrichment(doc["enrichment"])
        rating = Rating(doc["rating"]) if doc.get("rating") else None
        plain = doc.get("plain_text")
        snippet = Snippet(
            id=doc["id"],
            content=doc["content"],
            plain_text=plain if plain is not None else "",
            source_url=doc["source_url"],
            collected_at=parse_ts(doc["collected_at"]),
            rating=rating,
            context_snapshot=snapshot,
            enrichment=enrichment,
        )
        if plain is None:
            snippet = Snippet.create(
                id=snippet.id, content=snippet.content,
                source_url=snippet.source_url, collected_at=snippet.collected_at,
                rating=rating, context_snapshot=snapshot, enrichment=enrichment)
        return snippet
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DecodeError):
            raise
        raise DecodeError(f"bad snippet document: {exc}") from exc


def decode_enrichment(doc: Mapping[str, Any]) -> EnrichmentSignals:
    popularity = None
    if doc.get("popularity"):
        raw = doc["popularity"]
        popularity = PopularitySignal(
            kind=raw["kind"],
            count=raw["count"],
            accepted=raw.get("accepted"),
            extracted_from=raw.get("extracted_from", ""),
        )
    return EnrichmentSignals(
        domain=doc["domain"],
        detections=tuple(
            DetectionResult(
                detector_name=d["detector_name"],
                category=d["category"],
                matched_keyword=d["matched_keyword"],
                source=d["source"],
                version=d.get("version"),
            )
            for d in doc.get("detections", [])
        ),
        last_updated=parse_ts(doc["last_updated"]) if doc.get("last_updated") else None,
        popularity=popularity,
        code_examples=tuple(
            CodeExample(
                text=c["text"],
                language_hint=c.get("language_hint"),
                origin_snippet=c["origin_snippet"],
            )
            for c in doc.get("code_examples", [])
        ),
    )


def encode_snippet_store(store: SnippetStore) -> list[dict[str, Any]]:
    return [encode_snippet(store.get(sid)) for sid in sorted(store.ids())]


def decode_snippet_store(docs: list[Mapping[str, Any]]) -> SnippetStore:
    store = SnippetStore()
    for doc in docs:
        store.add(decode_snippet(doc))
    return store
