"""Report assembly: facet panels, signal groups, issues, and badges.

Everything here is pure: the clock ("now"), external suggestion lists, and
the author profile are parameters, so identical inputs serialize to
identical reports. Consumer adjustments (whitelist edits, dismissals,
threshold overrides) live outside the table and feed back in as arguments.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Sequence

from .clients import AuthorCredibility
from .domains import normalize_whitelist_entry
from .model import (
    KnowledgeTable,
    Rating,
    Snippet,
    SnippetStore,
    ThresholdConfig,
)
from .session import (
    SessionLog,
    build_timeline,
    infer_chosen_option,
    page_stats,
    query_stats,
    task_summary,
)

SCHEMA_VERSION = 1

CHOSEN_OPTION_NOTE = (
    "Inferred from the author's copy events; confidence is the option's "
    "share of attributed copies. Heuristic, not recorded by the author.")


class Facet(str, Enum):
    CONTEXT = "context"
    TRUSTWORTHINESS = "trustworthiness"
    THOROUGHNESS = "thoroughness"


class IssueKind(str, Enum):
    UNTRUSTED_DOMAIN = "untrusted_domain"
    LOW_DIVERSITY = "low_diversity"
    STALE_SNIPPET = "stale_snippet"
    CONFLICTING_CELL = "conflicting_cell"
    LOW_POPULARITY = "low_popularity"


class IssueStatus(str, Enum):
    OPEN = "open"
    DISMISSED = "dismissed"
    RESOLVED = "resolved"


class UnknownIssue(KeyError):
    pass


class InvalidDomain(ValueError):
    pass


class InvalidThreshold(ValueError):
    pass


@dataclass(frozen=True)
class Issue:
    id: str
    facet: Facet
    kind: IssueKind
    status: IssueStatus
    group: str
    message: str
    domain: str | None = None
    snippet_id: str | None = None
    option_id: str | None = None
    criterion_id: str | None = None
    age_days: int | None = None

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "id": self.id,
            "facet": self.facet.value,
            "kind": self.kind.value,
            "status": self.status.value,
            "group": self.group,
            "message": self.message,
        }
        for key in ("domain", "snippet_id", "option_id", "criterion_id", "age_days"):
            value = getattr(self, key)
            if value is not None:
                doc[key] = value
        return doc


@dataclass(frozen=True)
class Badge:
    level: str                 # none | yellow | red
    open_issues: int

    def to_dict(self) -> dict[str, Any]:
        return {"level": self.level, "open_issues": self.open_issues}


@dataclass(frozen=True)
class Whitelist:
    domains: frozenset[str]
    source: str = "default"    # default | user-edited

    def __contains__(self, domain: str) -> bool:
        return domain in self.domains

    def with_added(self, domain: str) -> "Whitelist":
        return Whitelist(self.domains | {domain}, "user-edited")

    def with_removed(self, domain: str) -> "Whitelist":
        return Whitelist(self.domains - {domain}, "user-edited")

    def sorted_domains(self) -> list[str]:
        return sorted(self.domains)


_default_whitelist: Whitelist | None = None


def default_whitelist() -> Whitelist:
    global _default_whitelist
    if _default_whitelist is None:
        path = Path(__file__).resolve().parent / "data" / "default_whitelist.json"
        doc = json.loads(path.read_text(encoding="utf-8"))
        domains = frozenset(doc["domains"])
        if len(domains) != 25:
            raise ValueError(
                f"default whitelist must hold exactly 25 domains, found {len(domains)}")
        _default_whitelist = Whitelist(domains, "default")
    return _default_whitelist


# --- rule evaluation ---------------------------------------------------------


def domain_distribution(table: KnowledgeTable,
                        snippets: SnippetStore) -> dict[str, int]:
    """Placed snippets per source domain; sums to the placed-snippet count."""
    counts: dict[str, int] = {}
    for sid in table.placed_snippet_ids():
        snippet = snippets.get(sid)
        if snippet is None or snippet.enrichment is None:
            continue
        domain = snippet.enrichment.domain
        counts[domain] = counts.get(domain, 0) + 1
    return counts


def whitelist_issues(distribution: Mapping[str, int],
                     whitelist: Whitelist) -> list[Issue]:
    """One untrusted_domain issue per distribution domain off the whitelist."""
    issues = []
    for domain in sorted(distribution):
        if domain not in whitelist:
            issues.append(Issue(
                id=f"untrusted_domain:{domain}",
                facet=Facet.TRUSTWORTHINESS,
                kind=IssueKind.UNTRUSTED_DOMAIN,
                status=IssueStatus.OPEN,
                group="Domains",
                message=f"{domain} is not on the trusted domains whitelist",
                domain=domain,
            ))
    return issues


def diversity_issue(distribution: Mapping[str, int],
                    cfg: ThresholdConfig) -> Issue | None:
    """Fires when the evidence comes from fewer distinct sources than the
    configured floor (default: a single source)."""
    distinct = len(distribution)
    if 0 < distinct < cfg.diversity_min_domains:
        return Issue(
            id="low_diversity",
            facet=Facet.TRUSTWORTHINESS,
            kind=IssueKind.LOW_DIVERSITY,
            status=IssueStatus.OPEN,
            group="Domains",
            message=(f"evidence comes from only {distinct} "
                     f"domain{'s' if distinct != 1 else ''}"),
        )
    return None


def staleness_issues(placed: Sequence[Snippet], now: datetime,
                     cfg: ThresholdConfig) -> list[Issue]:
    """stale_snippet per placed snippet older than the staleness threshold.

    Snippets without a last-updated signal produce no issue; the report
    annotates them as age-unknown instead.
    """
    issues = []
    for snippet in placed:
        if snippet.enrichment is None or snippet.enrichment.last_updated is None:
            continue
        age = now - snippet.enrichment.last_updated
        if age > cfg.staleness_threshold:
            age_days = age.days
            issues.append(Issue(
                id=f"stale_snippet:{snippet.id}",
                facet=Facet.TRUSTWORTHINESS,
                kind=IssueKind.STALE_SNIPPET,
                status=IssueStatus.OPEN,
                group="Evidence Snippets",
                message=f"snippet {snippet.id} was last updated {age_days} days ago",
                snippet_id=snippet.id,
                age_days=age_days,
            ))
    return issues


def conflict_cells(table: KnowledgeTable,
                   snippets: SnippetStore) -> list[tuple[str, str]]:
    """Cells whose ratings include both thumbs-up and thumbs-down.

    Informational ratings never create conflicts.
    """
    out = []
    for opt in table.options:
        for crit in table.criteria:
            sids = table.cells.get((opt.id, crit.id), ())
            ratings = {snippets.get(sid).rating
                       for sid in sids if snippets.get(sid) is not None}
            if Rating.POSITIVE in ratings and Rating.NEGATIVE in ratings:
                out.append((opt.id, crit.id))
    return out


def conflict_issues(table: KnowledgeTable, snippets: SnippetStore) -> list[Issue]:
    issues = []
    for opt_id, crit_id in conflict_cells(table, snippets):
        issues.append(Issue(
            id=f"conflicting_cell:{opt_id}:{crit_id}",
            facet=Facet.TRUSTWORTHINESS,
            kind=IssueKind.CONFLICTING_CELL,
            status=IssueStatus.OPEN,
            group="Evidence Snippets",
            message=(f"cell ({opt_id}, {crit_id}) holds both positive and "
                     f"negative ratings"),
            option_id=opt_id,
            criterion_id=crit_id,
        ))
    return issues


def low_popularity_issues(placed: Sequence[Snippet],
                          cfg: ThresholdConfig) -> list[Issue]:
    """Down-voted evidence: net upvote scores below the configured floor."""
    issues = []
    for snippet in placed:
        enrichment = snippet.enrichment
        if enrichment is None or enrichment.popularity is None:
            continue
        pop = enrichment.popularity
        if pop.kind == "upvotes" and pop.count < cfg.low_popularity_below:
            issues.append(Issue(
                id=f"low_popularity:{snippet.id}",
                facet=Facet.TRUSTWORTHINESS,
                kind=IssueKind.LOW_POPULARITY,
                status=IssueStatus.OPEN,
                group="Evidence Snippets",
                message=f"snippet {snippet.id} has a net score of {pop.count}",
                snippet_id=snippet.id,
            ))
    return issues


def facet_badge(issues: Sequence[Issue], cfg: ThresholdConfig) -> Badge:
    """Pure mapping of the open-issue count onto none/yellow/red."""
    open_count = sum(1 for issue in issues if issue.status is IssueStatus.OPEN)
    if open_count >= cfg.badge_red_at:
        level = "red"
    elif open_count >= cfg.badge_yellow_at:
        level = "yellow"
    else:
        level = "none"
    return Badge(level=level, open_issues=open_count)


# --- alternatives ------------------------------------------------------------


@dataclass(frozen=True)
class AlternativeCandidate:
    name: str
    supporting_options: int    # distinct options whose lists mention it
    best_rank: int             # best (lowest) position in any suggestion list


_SEPARATORS = (" vs ", " versus ")


def _strip_alternative(suggestion: str) -> str | None:
    text = suggestion.strip().lower()
    best = None
    for sep in _SEPARATORS:
        idx = text.find(sep)
        if idx >= 0 and (best is None or idx < best[0]):
            best = (idx, sep)
    if best is None:
        return None
    tail = text[best[0] + len(best[1]):].strip()
    return tail or None


def aggregate_alternatives(options: Sequence[str],
                           suggestion_lists: Mapping[str, Sequence[str]]
                           ) -> list[AlternativeCandidate]:
    """Merge per-option suggestion lists into one ranked alternatives list.

    The part after "vs"/"versus" is extracted and normalized; entries equal
    to existing options are dropped; the rest rank by how many distinct
    options mention them, ties by best suggestion rank, then name.
    """
    existing = {name.strip().lower() for name in options}
    support: dict[str, set[str]] = {}
    best_rank: dict[str, int] = {}
    for option, suggestions in suggestion_lists.items():
        for rank, suggestion in enumerate(suggestions):
            alternative = _strip_alternative(suggestion)
            if alternative is None or alternative in existing:
                continue
            support.setdefault(alternative, set()).add(option)
            if alternative not in best_rank or rank < best_rank[alternative]:
                best_rank[alternative] = rank
    candidates = [
        AlternativeCandidate(name=name,
                             supporting_options=len(opts),
                             best_rank=best_rank[name])
        for name, opts in support.items()
    ]
    candidates.sort(key=lambda c: (-c.supporting_options, c.best_rank, c.name))
    return candidates


# --- external input wrappers -------------------------------------------------


@dataclass(frozen=True)
class SuggestionsInput:
    """Alternatives material fetched by the service layer.

    state: ok | unavailable | no_data (no options to query).
    """
    state: str
    per_option: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    @classmethod
    def unavailable(cls) -> "SuggestionsInput":
        return cls(state="unavailable")


@dataclass(frozen=True)
class AuthorInput:
    """Author-credibility material; state: ok | not_provided | unverified."""
    state: str
    profile: AuthorCredibility | None = None

    @classmethod
    def not_provided(cls) -> "AuthorInput":
        return cls(state="not_provided")


# --- report ------------------------------------------------------------------


@dataclass(frozen=True)
class SignalGroup:
    name: str
    state: str                 # ok | no_data | unavailable | not_provided
    data: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "state": self.state, "data": self.data}


@dataclass(frozen=True)
class FacetPanel:
    facet: Facet
    badge: Badge
    groups: tuple[SignalGroup, ...]
    issues: tuple[Issue, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "badge": self.badge.to_dict(),
            "groups": [g.to_dict() for g in self.groups],
            "issues": [i.to_dict() for i in self.issues],
        }


@dataclass(frozen=True)
class AppraisalReport:
    table_id: str
    title: str
    now: datetime
    table_view: dict[str, Any]
    context: FacetPanel
    trustworthiness: FacetPanel
    thoroughness: FacetPanel
    snippet_annotations: dict[str, dict[str, Any]]

    @property
    def facets(self) -> dict[str, FacetPanel]:
        return {
            Facet.CONTEXT.value: self.context,
            Facet.TRUSTWORTHINESS.value: self.trustworthiness,
            Facet.THOROUGHNESS.value: self.thoroughness,
        }

    def all_issues(self) -> list[Issue]:
        return [*self.context.issues, *self.trustworthiness.issues,
                *self.thoroughness.issues]

    def to_dict(self) -> dict[str, Any]:
        from .codec import format_ts
        return {
            "schema_version": SCHEMA_VERSION,
            "table_id": self.table_id,
            "title": self.title,
            "now": format_ts(self.now),
            "table": self.table_view,
            "facets": {name: panel.to_dict() for name, panel in self.facets.items()},
            "snippet_annotations": self.snippet_annotations,
        }


def report_json(report: AppraisalReport) -> str:
    """Canonical serialized form (golden files compare this byte-for-byte)."""
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False)


def _excerpt(text: str, limit: int = 180) -> str:
    return text if len(text) <= limit else text[: limit - 1].rstrip() + "…"


def _seconds(td) -> float:
    return round(td.total_seconds(), 3)


def assemble_report(table: KnowledgeTable,
                    snippets: SnippetStore,
                    log: SessionLog | None,
                    whitelist: Whitelist,
                    alternatives: SuggestionsInput,
                    author: AuthorInput,
                    now: datetime,
                    cfg: ThresholdConfig,
                    *,
                    dismissed_issue_ids: frozenset[str] = frozenset(),
                    resolved_trusted: frozenset[str] = frozenset()) -> AppraisalReport:
    """Assemble the three facet panels from enriched inputs.

    dismissed_issue_ids and resolved_trusted carry the consumer's past
    actions so issue rows keep their dismissed/resolved status across
    recomputations.
    """
    placed_ids = table.placed_snippet_ids()
    placed = [snippets.get(sid) for sid in placed_ids]
    placed = [s for s in placed if s is not None]

    timeline = build_timeline(log, table) if log else None
    shade_by_snippet: dict[str, int] = {}
    if timeline:
        for entry in timeline.entries:
            for page in entry.pages:
                for sid in page.snippet_ids:
                    shade_by_snippet.setdefault(sid, page.shade_index)

    distribution = domain_distribution(table, snippets)

    # Trustworthiness issues. add-as-trusted history renders as resolved
    # rows; dismissals override any open status.
    issues: list[Issue] = list(whitelist_issues(distribution, whitelist))
    for domain in sorted(resolved_trusted & set(distribution)):
        if domain in whitelist:
            issues.append(Issue(
                id=f"untrusted_domain:{domain}",
                facet=Facet.TRUSTWORTHINESS,
                kind=IssueKind.UNTRUSTED_DOMAIN,
                status=IssueStatus.RESOLVED,
                group="Domains",
                message=f"{domain} was added to the trusted domains whitelist",
                domain=domain,
            ))
    diversity = diversity_issue(distribution, cfg)
    if diversity is not None:
        issues.append(diversity)
    issues.extend(staleness_issues(placed, now, cfg))
    issues.extend(low_popularity_issues(placed, cfg))
    issues.extend(conflict_issues(table, snippets))
    issues = [
        dataclasses.replace(issue, status=IssueStatus.DISMISSED)
        if issue.id in dismissed_issue_ids and issue.status is IssueStatus.OPEN
        else issue
        for issue in issues
    ]

    annotations = _snippet_annotations(placed, whitelist, now, cfg, shade_by_snippet)

    context_panel = _context_panel(placed, log, table, cfg)
    trust_panel = _trustworthiness_panel(
        issues, distribution, whitelist, table, snippets, placed, author, cfg)
    thorough_panel = _thoroughness_panel(
        table, snippets, log, timeline, alternatives, now, cfg)

    table_view = {
        "options": [{"id": o.id, "name": o.name} for o in table.options],
        "criteria": [{"id": c.id, "name": c.name} for c in table.criteria],
        "cells": [
            {"option_id": opt.id, "criterion_id": crit.id,
             "snippet_ids": list(table.cells.get((opt.id, crit.id), ()))}
            for opt in table.options for crit in table.criteria
            if table.cells.get((opt.id, crit.id))
        ],
        "snippets": [
            {"id": s.id, "excerpt": _excerpt(s.plain_text),
             "rating": s.rating.value if s.rating else None,
             "source_url": s.source_url}
            for s in placed
        ],
    }

    return AppraisalReport(
        table_id=table.id,
        title=table.title,
        now=now,
        table_view=table_view,
        context=context_panel,
        trustworthiness=trust_panel,
        thoroughness=thorough_panel,
        snippet_annotations=annotations,
    )


def _snippet_annotations(placed: Sequence[Snippet], whitelist: Whitelist,
                         now: datetime, cfg: ThresholdConfig,
                         shades: Mapping[str, int]) -> dict[str, dict[str, Any]]:
    from .codec import format_ts
    annotations: dict[str, dict[str, Any]] = {}
    for snippet in placed:
        e = snippet.enrichment
        last_updated = e.last_updated if e else None
        annotations[snippet.id] = {
            "domain": e.domain if e else None,
            "domain_trusted": (e.domain in whitelist) if e else False,
            "popularity": (
                {"kind": e.popularity.kind, "count": e.popularity.count,
                 "accepted": e.popularity.accepted}
                if e and e.popularity else None
            ),
            "last_updated": format_ts(last_updated) if last_updated else None,
            "age_days": (now - last_updated).days if last_updated else None,
            "age_unknown": last_updated is None,
            "detections": [
                {"name": d.detector_name, "category": d.category,
                 "version": d.version, "source": d.source}
                for d in (e.detections if e else ())
            ],
            "contains_code": bool(e and e.code_examples),
            "code_example_count": len(e.code_examples) if e else 0,
            "has_surroundings": snippet.context_snapshot is not None,
            "timeline_shade": shades.get(snippet.id),
        }
    return annotations


def _context_panel(placed: Sequence[Snippet], log: SessionLog | None,
                   table: KnowledgeTable, cfg: ThresholdConfig) -> FacetPanel:
    if log:
        stats = query_stats(log, table, cfg)
        queries_group = SignalGroup(
            name="Search Queries",
            state="ok" if stats else "no_data",
            data={"queries": [
                {"query": s.query, "ordinal": s.ordinal,
                 "effective_seconds": _seconds(s.effective_duration),
                 "snippet_count": s.snippet_count}
                for s in stats
            ]},
        )
    else:
        queries_group = SignalGroup(
            name="Search Queries", state="no_data", data={"queries": []})

    technologies: dict[str, dict[str, Any]] = {}
    for snippet in placed:
        for d in (snippet.enrichment.detections if snippet.enrichment else ()):
            entry = technologies.setdefault(d.detector_name, {
                "name": d.detector_name, "category": d.category,
                "versions": [], "snippet_ids": []})
            if d.version and d.version not in entry["versions"]:
                entry["versions"].append(d.version)
            if snippet.id not in entry["snippet_ids"]:
                entry["snippet_ids"].append(snippet.id)
    category_order = {"language": 0, "framework": 1, "platform": 2}
    tech_list = sorted(
        technologies.values(),
        key=lambda t: (category_order.get(t["category"], 9),
                       -len(t["snippet_ids"]), t["name"]))
    for entry in tech_list:
        entry["versions"] = sorted(entry["versions"])
    tech_group = SignalGroup(
        name="Languages, Frameworks, and Platforms",
        state="ok" if tech_list else "no_data",
        data={"technologies": tech_list},
    )

    with_snapshots = [s.id for s in placed if s.context_snapshot is not None]
    surroundings_group = SignalGroup(
        name="Snippet Surroundings",
        state="ok" if with_snapshots else "no_data",
        data={"available": len(with_snapshots), "total": len(placed),
              "snippet_ids": with_snapshots},
    )

    issues: tuple[Issue, ...] = ()
    return FacetPanel(
        facet=Facet.CONTEXT,
        badge=facet_badge(issues, cfg),
        groups=(queries_group, tech_group, surroundings_group),
        issues=issues,
    )


def _trustworthiness_panel(issues: Sequence[Issue],
                           distribution: Mapping[str, int],
                           whitelist: Whitelist,
                           table: KnowledgeTable,
                           snippets: SnippetStore,
                           placed: Sequence[Snippet],
                           author: AuthorInput,
                           cfg: ThresholdConfig) -> FacetPanel:
    dist_rows = [
        {"domain": domain, "count": count, "trusted": domain in whitelist}
        for domain, count in sorted(distribution.items(),
                                    key=lambda kv: (-kv[1], kv[0]))
    ]
    domains_group = SignalGroup(
        name="Domains",
        state="ok" if dist_rows else "no_data",
        data={
            "distribution": dist_rows,
            "distinct_domains": len(dist_rows),
            "whitelist": whitelist.sorted_domains(),
            "whitelist_source": whitelist.source,
        },
    )

    stale_ids = [i.snippet_id for i in issues
                 if i.kind is IssueKind.STALE_SNIPPET]
    low_pop_ids = [i.snippet_id for i in issues
                   if i.kind is IssueKind.LOW_POPULARITY]
    age_unknown = [s.id for s in placed
                   if s.enrichment is None or s.enrichment.last_updated is None]
    conflicts = [
        {"option_id": i.option_id, "criterion_id": i.criterion_id}
        for i in issues if i.kind is IssueKind.CONFLICTING_CELL
    ]
    evidence_group = SignalGroup(
        name="Evidence Snippets",
        state="ok" if placed else "no_data",
        data={
            "stale_snippet_ids": stale_ids,
            "age_unknown_snippet_ids": age_unknown,
            "low_popularity_snippet_ids": low_pop_ids,
            "conflict_cells": conflicts,
        },
    )

    if author.state == "ok" and author.profile is not None:
        profile = author.profile
        author_data: dict[str, Any] = {
            "display_name": profile.display_name,
            "top_repo_stars": [[name, stars] for name, stars in profile.top_repo_stars],
            "top_languages": list(profile.top_languages),
            "affiliation": profile.affiliation,
            "profile_url": profile.profile_url,
        }
    else:
        author_data = {}
    author_group = SignalGroup(
        name="Task Author", state=author.state, data=author_data)

    return FacetPanel(
        facet=Facet.TRUSTWORTHINESS,
        badge=facet_badge(issues, cfg),
        groups=(domains_group, evidence_group, author_group),
        issues=tuple(issues),
    )


def _thoroughness_panel(table: KnowledgeTable, snippets: SnippetStore,
                        log: SessionLog | None, timeline,
                        alternatives: SuggestionsInput,
                        now: datetime, cfg: ThresholdConfig) -> FacetPanel:
    from .codec import format_ts

    if log:
        summary = task_summary(log, table, now, cfg)
        process_data = {
            "summary": {
                "total_effective_seconds": _seconds(summary.total_effective_duration),
                "last_updated_age_days": summary.last_updated_age.days,
                "last_updated_age_seconds": _seconds(summary.last_updated_age),
                "option_count": summary.option_count,
                "criterion_count": summary.criterion_count,
                "evidence_count": summary.evidence_count,
            },
            "pages": [
                {"url": p.url,
                 "effective_seconds": _seconds(p.effective_duration),
                 "max_scroll": round(p.max_scroll, 4),
                 "snippet_count": p.snippet_count}
                for p in page_stats(log, cfg)
            ],
            "timeline": timeline_to_dict(timeline) if timeline else None,
        }
        process_group = SignalGroup(
            name="Research Process", state="ok", data=process_data)
    else:
        summary = task_summary(None, table, now, cfg)
        process_group = SignalGroup(
            name="Research Process", state="no_data",
            data={"summary": {
                "total_effective_seconds": 0.0,
                "last_updated_age_days": summary.last_updated_age.days,
                "last_updated_age_seconds": _seconds(summary.last_updated_age),
                "option_count": summary.option_count,
                "criterion_count": summary.criterion_count,
                "evidence_count": summary.evidence_count,
            }, "pages": [], "timeline": None},
        )

    if alternatives.state == "ok":
        ranked = aggregate_alternatives(
            [o.name for o in table.options], alternatives.per_option)
        alt_group = SignalGroup(
            name="Commonly Searched for Alternatives",
            state="ok",
            data={"alternatives": [
                {"name": c.name, "supporting_options": c.supporting_options,
                 "best_rank": c.best_rank}
                for c in ranked
            ]},
        )
    else:
        alt_group = SignalGroup(
            name="Commonly Searched for Alternatives",
            state=alternatives.state, data={"alternatives": []})

    examples = []
    for sid in table.placed_snippet_ids():
        snippet = snippets.get(sid)
        if snippet is None or snippet.enrichment is None:
            continue
        for example in snippet.enrichment.code_examples:
            examples.append({
                "snippet_id": sid,
                "language_hint": example.language_hint,
                "text": example.text,
            })
    chosen = infer_chosen_option(log, table, snippets) if log else None
    code_group = SignalGroup(
        name="Code Examples",
        state="ok" if examples or chosen else "no_data",
        data={
            "examples": examples,
            "chosen_option": (
                {"option_id": chosen.option_id,
                 "option_name": table.option_name(chosen.option_id),
                 "confidence": round(chosen.confidence, 4),
                 "attributed_copies": chosen.attributed_copies,
                 "note": CHOSEN_OPTION_NOTE}
                if chosen else None
            ),
        },
    )

    issues: tuple[Issue, ...] = ()
    return FacetPanel(
        facet=Facet.THOROUGHNESS,
        badge=facet_badge(issues, cfg),
        groups=(process_group, alt_group, code_group),
        issues=issues,
    )


def timeline_to_dict(timeline) -> dict[str, Any]:
    from .codec import format_ts
    return {
        "entries": [
            {
                "query": entry.query,
                "at": format_ts(entry.at),
                "shade_index": entry.shade_index,
                "snippet_ids": list(entry.snippet_ids),
                "pages": [
                    {"url": page.url,
                     "entered_at": format_ts(page.entered_at),
                     "shade_index": page.shade_index,
                     "snippet_ids": list(page.snippet_ids)}
                    for page in entry.pages
                ],
            }
            for entry in timeline.entries
        ],
        "node_count": timeline.node_count(),
    }


# --- consumer adjustments ----------------------------------------------------


@dataclass(frozen=True)
class ConsumerState:
    whitelist: Whitelist
    trusted_added: frozenset[str] = frozenset()
    dismissed: frozenset[str] = frozenset()
    threshold_overrides: tuple[tuple[str, float], ...] = ()

    @classmethod
    def initial(cls) -> "ConsumerState":
        return cls(whitelist=default_whitelist())

    def overrides_dict(self) -> dict[str, float]:
        return dict(self.threshold_overrides)

    def to_dict(self) -> dict[str, Any]:
        return {
            "whitelist": {
                "domains": self.whitelist.sorted_domains(),
                "source": self.whitelist.source,
            },
            "trusted_added": sorted(self.trusted_added),
            "dismissed": sorted(self.dismissed),
            "threshold_overrides": dict(self.threshold_overrides),
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "ConsumerState":
        wl = doc.get("whitelist") or {}
        return cls(
            whitelist=Whitelist(frozenset(wl.get("domains", ())),
                                wl.get("source", "default")),
            trusted_added=frozenset(doc.get("trusted_added", ())),
            dismissed=frozenset(doc.get("dismissed", ())),
            threshold_overrides=tuple(sorted(
                (doc.get("threshold_overrides") or {}).items())),
        )


@dataclass(frozen=True)
class ReportInputs:
    """Everything assemble_report needs besides the consumer's state."""
    table: KnowledgeTable
    snippets: SnippetStore
    log: SessionLog | None
    alternatives: SuggestionsInput
    author: AuthorInput
    now: datetime
    base_cfg: ThresholdConfig = ThresholdConfig()


def report_for_state(inputs: ReportInputs, state: ConsumerState) -> AppraisalReport:
    try:
        cfg = inputs.base_cfg.with_overrides(state.overrides_dict())
    except (KeyError, ValueError) as exc:
        raise InvalidThreshold(str(exc))
    return assemble_report(
        inputs.table, inputs.snippets, inputs.log,
        state.whitelist, inputs.alternatives, inputs.author,
        inputs.now, cfg,
        dismissed_issue_ids=state.dismissed,
        resolved_trusted=state.trusted_added,
    )


def apply_adjustment(state: ConsumerState, adjustment: Mapping[str, Any],
                     inputs: ReportInputs) -> tuple[ConsumerState, AppraisalReport]:
    """Apply one consumer adjustment and recompute the report.

    Raises UnknownIssue, InvalidDomain, or InvalidThreshold for malformed
    adjustments; the stored state is untouched in that case.
    """
    action = adjustment.get("action")
    if action == "add_trusted":
        domain = _normalized_domain(adjustment.get("domain"))
        new_state = dataclasses.replace(
            state,
            whitelist=state.whitelist.with_added(domain),
            trusted_added=state.trusted_added | {domain},
        )
    elif action == "remove_trusted":
        domain = _normalized_domain(adjustment.get("domain"))
        new_state = dataclasses.replace(
            state,
            whitelist=state.whitelist.with_removed(domain),
            trusted_added=state.trusted_added - {domain},
        )
    elif action == "dismiss":
        issue_id = adjustment.get("issue_id")
        current = report_for_state(inputs, state)
        known = {issue.id for issue in current.all_issues()}
        if issue_id not in known:
            raise UnknownIssue(issue_id)
        new_state = dataclasses.replace(
            state, dismissed=state.dismissed | {issue_id})
    elif action == "set_threshold":
        name = adjustment.get("field")
        value = adjustment.get("value")
        overrides = dict(state.threshold_overrides)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise InvalidThreshold(f"value for {name!r} must be a number")
        overrides[str(name)] = value
        try:
            ThresholdConfig().with_overrides(overrides)
        except (KeyError, ValueError) as exc:
            raise InvalidThreshold(str(exc))
        new_state = dataclasses.replace(
            state, threshold_overrides=tuple(sorted(overrides.items())))
    else:
        raise ValueError(f"unknown adjustment action: {action!r}")
    return new_state, report_for_state(inputs, new_state)


def _normalized_domain(raw: Any) -> str:
    try:
        return normalize_whitelist_entry(str(raw or ""))
    except ValueError as exc:
        raise InvalidDomain(str(exc))
