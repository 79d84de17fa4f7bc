"""Per-snippet signal computation.

Enrichment runs once at import time over captured bytes and is immutable
afterwards: same bytes in, same signals out.
"""

from __future__ import annotations

from ..domains import extract_domain
from ..htmldoc import html_to_text
from ..model import EnrichmentSignals, Snippet, ThresholdConfig
from .code_blocks import extract_code_examples
from .dates import extract_last_updated
from .detectors import (
    Detector,
    DetectorRegistry,
    RegistryError,
    default_registry,
    detect_platforms,
    detect_with_versions,
    extract_version,
)
from .popularity import extract_popularity
from .snapshot import SelectionNotFound, snapshot_bounds

__all__ = [
    "Detector",
    "DetectorRegistry",
    "RegistryError",
    "SelectionNotFound",
    "default_registry",
    "detect_platforms",
    "detect_with_versions",
    "enrich_snippet",
    "extract_code_examples",
    "extract_domain",
    "extract_last_updated",
    "extract_popularity",
    "extract_version",
    "snapshot_bounds",
]


def enrich_snippet(snippet: Snippet, page_html: str | None,
                   registry: DetectorRegistry,
                   cfg: ThresholdConfig | None = None) -> Snippet:
    """Compute and attach the full signal set for one snippet.

    ``page_html`` is the captured parent page when the bundle carries one;
    date and popularity extraction fall back to the context snapshot's
    surroundings when it does not.
    """
    cfg = cfg or ThresholdConfig()
    domain = extract_domain(snippet.source_url)
    parent_text = html_to_text(page_html) if page_html else ""

    detections = detect_with_versions(snippet, parent_text, registry, cfg)

    date_source = page_html
    popularity_source = page_html
    if snippet.context_snapshot is not None:
        if not date_source:
            date_source = snippet.context_snapshot.surroundings
        if not popularity_source:
            popularity_source = snippet.context_snapshot.surroundings

    last_updated = extract_last_updated(
        date_source or "", snippet.source_url,
        as_of=snippet.collected_at, anchor_text=snippet.plain_text)
    popularity = extract_popularity(
        popularity_source or "", domain, anchor_text=snippet.plain_text)
    code_examples = tuple(extract_code_examples(snippet, registry))

    return snippet.with_enrichment(EnrichmentSignals(
        domain=domain,
        detections=tuple(detections),
        last_updated=last_updated,
        popularity=popularity,
        code_examples=code_examples,
    ))
