"""Bundle import: validate, enrich, and persist a captured table.

A bundle directory holds:

    table.json          the table document
    snippets/*.json     one snippet document per file
    session.log         author activity, one JSON event per line (optional)
    pages/index.json    url -> file map for captured pages (optional)
    pages/*.html        captured page content

The stored table id is a hash of the bundle content, so re-importing
identical content is a no-op that returns the same id.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .codec import DecodeError, decode_snippet, decode_table
from .domains import normalize_url
from .enrichment import DetectorRegistry, enrich_snippet
from .enrichment.snapshot import SelectionNotFound, snapshot_bounds
from .model import SnippetStore, ThresholdConfig, validate_table
from .session import EmptyLog, ingest_session_log
from .store import DocumentStore

import dataclasses


class BundleError(ValueError):
    """The bundle failed validation; message names the offending file."""


def _content_hash(parts: list[bytes]) -> str:
    digest = hashlib.sha256()
    for part in parts:
        digest.update(hashlib.sha256(part).digest())
    return digest.hexdigest()[:16]


def import_bundle(store: DocumentStore, bundle_path: str | Path,
                  registry: DetectorRegistry,
                  cfg: ThresholdConfig | None = None) -> str:
    """Import one bundle directory; returns the stored table id."""
    cfg = cfg or ThresholdConfig()
    bundle = Path(bundle_path)
    table_file = bundle / "table.json"
    if not table_file.exists():
        raise BundleError(f"{table_file}: missing")

    hash_parts = [table_file.read_bytes()]
    try:
        table = decode_table(json.loads(table_file.read_text(encoding="utf-8")))
    except (DecodeError, json.JSONDecodeError) as exc:
        raise BundleError(f"{table_file}: {exc}")

    snippets = SnippetStore()
    snippet_dir = bundle / "snippets"
    if snippet_dir.is_dir():
        for path in sorted(snippet_dir.glob("*.json")):
            hash_parts.append(path.read_bytes())
            try:
                snippets.add(decode_snippet(
                    json.loads(path.read_text(encoding="utf-8"))))
            except (DecodeError, json.JSONDecodeError) as exc:
                raise BundleError(f"{path}: {exc}")

    session_raw: str | None = None
    session_file = bundle / "session.log"
    if session_file.exists():
        session_raw = session_file.read_text(encoding="utf-8")
        hash_parts.append(session_raw.encode("utf-8"))
        try:
            ingest_session_log(session_raw)  # parse errors surface at import
        except EmptyLog as exc:
            raise BundleError(f"{session_file}: {exc}")

    pages: dict[str, str] = {}
    pages_dir = bundle / "pages"
    if pages_dir.is_dir():
        index_file = pages_dir / "index.json"
        if not index_file.exists():
            raise BundleError(f"{index_file}: missing (pages/ needs an index)")
        try:
            index = json.loads(index_file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise BundleError(f"{index_file}: {exc}")
        for url, name in sorted(index.items()):
            page_file = pages_dir / name
            if not page_file.exists():
                raise BundleError(f"{page_file}: referenced by index but missing")
            content = page_file.read_text(encoding="utf-8")
            pages[normalize_url(url)] = content
            hash_parts.append(content.encode("utf-8"))

    result = validate_table(table, snippets)
    if not result.ok:
        details = "; ".join(f"{v.kind}({v.detail})" for v in result.violations)
        raise BundleError(f"{table_file}: validation failed: {details}")

    table_id = _content_hash(hash_parts)
    table = dataclasses.replace(table, id=table_id)

    enriched = SnippetStore()
    for sid in sorted(snippets.ids()):
        snippet = snippets.get(sid)
        page_html = pages.get(normalize_url(snippet.source_url))
        if snippet.context_snapshot is None and page_html:
            try:
                snapshot = snapshot_bounds(
                    page_html, snippet.plain_text,
                    enrich_domain(snippet.source_url))
                snippet = snippet.with_snapshot(snapshot)
            except SelectionNotFound:
                pass  # capture without surroundings is still valid
        enriched.add(enrich_snippet(snippet, page_html, registry, cfg))

    store.save_table(table)
    store.save_snippets(table_id, enriched)
    if session_raw is not None:
        store.save_session(table_id, session_raw)
    if pages:
        store.save_pages(table_id, pages)
    return table_id


def enrich_domain(url: str) -> str:
    from .domains import extract_domain
    return extract_domain(url)
