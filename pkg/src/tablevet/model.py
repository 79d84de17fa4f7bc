"""Shared domain types: the comparison table, snippets, and thresholds.

A table holds options (rows), criteria (columns), and cells of rated
evidence snippets. Snippets live in a separate store and are referenced by
id, because a snippet can sit in a cell and in the uncategorized repository
at the same time.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Iterator, Mapping

from .domains import InvalidUrl, extract_domain
from .htmldoc import html_to_text


class Rating(str, Enum):
    POSITIVE = "positive"          # thumbs-up
    NEGATIVE = "negative"          # thumbs-down
    INFORMATIONAL = "informational"  # the "i" mark


@dataclass(frozen=True)
class Option:
    id: str
    name: str


@dataclass(frozen=True)
class Criterion:
    id: str
    name: str


@dataclass(frozen=True)
class ContextSnapshot:
    """Automatically captured surroundings of a collected snippet.

    highlight_start/end are offsets into the plain-text projection of
    ``surroundings`` marking the collected content.
    """

    surroundings: str
    highlight_start: int
    highlight_end: int
    includes_question_block: bool = False

    def plain_text(self) -> str:
        return html_to_text(self.surroundings)


@dataclass(frozen=True)
class EnrichmentSignals:
    """Per-snippet signals computed at import time (see enrichment package)."""

    domain: str
    detections: tuple["DetectionResult", ...] = ()
    last_updated: datetime | None = None
    popularity: "PopularitySignal | None" = None
    code_examples: tuple["CodeExample", ...] = ()


@dataclass(frozen=True)
class DetectionResult:
    detector_name: str
    category: str                 # language | framework | platform
    matched_keyword: str
    source: str                   # snippet | parent_page
    version: str | None = None


@dataclass(frozen=True)
class PopularitySignal:
    kind: str                     # upvotes | claps
    count: int
    accepted: bool | None = None  # only meaningful for upvotes
    extracted_from: str = ""

    def __post_init__(self):
        if self.kind == "claps" and self.count < 0:
            raise ValueError("clap counts cannot be negative")


@dataclass(frozen=True)
class CodeExample:
    text: str
    language_hint: str | None
    origin_snippet: str

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("code example text is empty")


@dataclass(frozen=True)
class Snippet:
    """One captured evidence unit."""

    id: str
    content: str                  # captured markup fragment
    plain_text: str               # derived: tags stripped, whitespace collapsed
    source_url: str
    collected_at: datetime
    rating: Rating | None = None  # None only while uncategorized
    context_snapshot: ContextSnapshot | None = None
    enrichment: EnrichmentSignals | None = None

    @classmethod
    def create(cls, id: str, content: str, source_url: str,
               collected_at: datetime, rating: Rating | None = None,
               context_snapshot: ContextSnapshot | None = None,
               enrichment: EnrichmentSignals | None = None) -> "Snippet":
        return cls(
            id=id,
            content=content,
            plain_text=html_to_text(content),
            source_url=source_url,
            collected_at=collected_at,
            rating=rating,
            context_snapshot=context_snapshot,
            enrichment=enrichment,
        )

    def with_enrichment(self, enrichment: EnrichmentSignals) -> "Snippet":
        return dataclasses.replace(self, enrichment=enrichment)

    def with_snapshot(self, snapshot: ContextSnapshot) -> "Snippet":
        return dataclasses.replace(self, context_snapshot=snapshot)


class SnippetStore:
    """Id-keyed snippet collection shared by the table and the repository."""

    def __init__(self, snippets: Mapping[str, Snippet] | None = None):
        self._snippets: dict[str, Snippet] = dict(snippets or {})

    @classmethod
    def of(cls, *snippets: Snippet) -> "SnippetStore":
        return cls({s.id: s for s in snippets})

    def add(self, snippet: Snippet) -> None:
        self._snippets[snippet.id] = snippet

    def get(self, snippet_id: str) -> Snippet | None:
        return self._snippets.get(snippet_id)

    def __contains__(self, snippet_id: str) -> bool:
        return snippet_id in self._snippets

    def __iter__(self) -> Iterator[Snippet]:
        return iter(self._snippets.values())

    def __len__(self) -> int:
        return len(self._snippets)

    def ids(self) -> list[str]:
        return list(self._snippets)

    def __eq__(self, other) -> bool:
        return isinstance(other, SnippetStore) and self._snippets == other._snippets


@dataclass(frozen=True)
class KnowledgeTable:
    """The decision artifact: options x criteria with rated evidence."""

    id: str
    title: str
    options: tuple[Option, ...]
    criteria: tuple[Criterion, ...]
    # (option_id, criterion_id) -> snippet ids placed in that cell
    cells: dict[tuple[str, str], tuple[str, ...]]
    created_at: datetime
    updated_at: datetime
    author_profile_url: str | None = None

    def placed_snippet_ids(self) -> list[str]:
        """Distinct placed snippet ids, in cell order (options x criteria)."""
        seen: dict[str, None] = {}
        for opt in self.options:
            for crit in self.criteria:
                for sid in self.cells.get((opt.id, crit.id), ()):
                    seen.setdefault(sid)
        return list(seen)

    def placements(self) -> list[tuple[str, str, str]]:
        """(option_id, criterion_id, snippet_id) per placement, cell order."""
        out = []
        for opt in self.options:
            for crit in self.criteria:
                for sid in self.cells.get((opt.id, crit.id), ()):
                    out.append((opt.id, crit.id, sid))
        return out

    def option_snippet_ids(self, option_id: str) -> list[str]:
        out: dict[str, None] = {}
        for (opt_id, _crit_id), sids in self.cells.items():
            if opt_id == option_id:
                for sid in sids:
                    out.setdefault(sid)
        return list(out)

    def option_name(self, option_id: str) -> str | None:
        for opt in self.options:
            if opt.id == option_id:
                return opt.name
        return None


@dataclass(frozen=True)
class ThresholdConfig:
    """Tunable rule thresholds; defaults follow the shipped configuration."""

    idle_threshold: timedelta = timedelta(seconds=8)
    staleness_threshold: timedelta = timedelta(days=3 * 365)
    diversity_min_domains: int = 2
    badge_yellow_at: int = 1
    badge_red_at: int = 2
    suggestion_top_n: int = 10
    version_vicinity: int = 30
    low_popularity_below: int = 0  # upvote scores below this raise an issue

    def __post_init__(self):
        if self.idle_threshold <= timedelta(0):
            raise ValueError("idle_threshold must be positive")
        if self.staleness_threshold <= timedelta(0):
            raise ValueError("staleness_threshold must be positive")
        for name in ("diversity_min_domains", "badge_yellow_at",
                     "badge_red_at", "suggestion_top_n", "version_vicinity"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.badge_red_at <= self.badge_yellow_at:
            raise ValueError("badge_red_at must exceed badge_yellow_at")

    _DURATION_FIELDS = ("idle_threshold", "staleness_threshold")
    _COUNT_FIELDS = ("diversity_min_domains", "badge_yellow_at", "badge_red_at",
                     "suggestion_top_n", "version_vicinity", "low_popularity_below")

    def with_overrides(self, overrides: Mapping[str, object]) -> "ThresholdConfig":
        """Apply consumer overrides (durations given in seconds)."""
        kwargs: dict[str, object] = {}
        for name, value in overrides.items():
            if name in self._DURATION_FIELDS:
                kwargs[name] = timedelta(seconds=float(value))  # type: ignore[arg-type]
            elif name in self._COUNT_FIELDS:
                kwargs[name] = int(value)  # type: ignore[call-overload]
            else:
                raise KeyError(name)
        return dataclasses.replace(self, **kwargs)


# --- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_table(table: KnowledgeTable, snippets: SnippetStore) -> ValidationResult:
    """Check referential integrity and id/timestamp invariants.

    Violations are data, not failures; inputs are never mutated.
    """
    violations: list[Violation] = []

    option_ids = [o.id for o in table.options]
    for oid in _duplicates(option_ids):
        violations.append(Violation("duplicate_option_id", oid))
    criterion_ids = [c.id for c in table.criteria]
    for cid in _duplicates(criterion_ids):
        violations.append(Violation("duplicate_criterion_id", cid))

    if table.updated_at < table.created_at:
        violations.append(Violation(
            "timestamp_inversion",
            f"updated_at {table.updated_at.isoformat()} precedes "
            f"created_at {table.created_at.isoformat()}"))

    known_options = set(option_ids)
    known_criteria = set(criterion_ids)
    for (opt_id, crit_id), sids in table.cells.items():
        if opt_id not in known_options:
            violations.append(Violation("unknown_option", opt_id))
        if crit_id not in known_criteria:
            violations.append(Violation("unknown_criterion", crit_id))
        for sid in sids:
            if sid not in snippets:
                violations.append(Violation("dangling_ref", sid))

    for sid in table.placed_snippet_ids():
        snippet = snippets.get(sid)
        if snippet is None:
            continue  # already reported as dangling_ref
        if snippet.rating is None:
            violations.append(Violation("unrated_placement", sid))

    for snippet in snippets:
        try:
            extract_domain(snippet.source_url)
        except InvalidUrl:
            violations.append(Violation("invalid_source_url",
                                        f"{snippet.id}: {snippet.source_url}"))

    return ValidationResult(tuple(violations))


def _duplicates(values: list[str]) -> list[str]:
    seen: set[str] = set()
    dups: list[str] = []
    for v in values:
        if v in seen and v not in dups:
            dups.append(v)
        seen.add(v)
    return dups


def utcnow() -> datetime:
    return datetime.now(timezone.utc)
