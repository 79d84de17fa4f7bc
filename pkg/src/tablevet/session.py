"""Author-activity analytics: goal traces, effort, timeline, chosen option.

The activity log arrives as one JSON event per line. Everything here is a
pure function over the ingested log, so durations and the timeline are
reproducible for any supplied "now".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .codec import DecodeError, parse_ts
from .domains import normalize_url
from .model import KnowledgeTable, SnippetStore, ThresholdConfig


class EmptyLog(ValueError):
    """No event in the input could be parsed."""


class NowBeforeData(ValueError):
    """The supplied "now" precedes the data it should be measured against."""


class EventKind(str, Enum):
    QUERY_ISSUED = "query_issued"
    PAGE_ENTER = "page_enter"
    PAGE_LEAVE = "page_leave"
    SCROLL = "scroll"
    SNIPPET_COLLECTED = "snippet_collected"
    COPY = "copy"
    ACTIVITY_HEARTBEAT = "activity_heartbeat"


_KIND_FIELDS = {
    EventKind.QUERY_ISSUED: ("query",),
    EventKind.PAGE_ENTER: ("url",),
    EventKind.PAGE_LEAVE: ("url",),
    EventKind.SCROLL: ("url", "visible_fraction"),
    EventKind.SNIPPET_COLLECTED: ("snippet_id", "url"),
    EventKind.COPY: ("url", "text"),
    EventKind.ACTIVITY_HEARTBEAT: ("url",),
}


@dataclass(frozen=True)
class SessionEvent:
    at: datetime
    kind: EventKind
    url: str | None = None
    query: str | None = None
    visible_fraction: float | None = None
    snippet_id: str | None = None
    text: str | None = None
    synthetic: bool = False


@dataclass(frozen=True)
class MalformedEvent:
    position: int          # 1-based record number in the input
    reason: str


@dataclass(frozen=True)
class SessionLog:
    events: tuple[SessionEvent, ...]
    malformed: tuple[MalformedEvent, ...] = ()
    unknown_kinds_skipped: int = 0

    def __len__(self) -> int:
        return len(self.events)


def parse_session_lines(text: str) -> list[tuple[int, Mapping]]:
    """Split a JSONL session file into (position, record) pairs.

    Unparseable lines come back as (position, {"__error__": reason}) so
    ingest can report them with positions.
    """
    records: list[tuple[int, Mapping]] = []
    for position, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append((position, json.loads(line)))
        except json.JSONDecodeError as exc:
            records.append((position, {"__error__": f"invalid JSON: {exc.msg}"}))
    return records


def ingest_session_log(raw: Iterable[Mapping] | str) -> SessionLog:
    """Validate, sort, and balance raw event records into a SessionLog.

    Malformed records are collected with their positions rather than raised;
    EmptyLog is raised only when nothing parses at all. page_enter/page_leave
    pairs are balanced by inserting synthetic leaves at the next enter or at
    the log end (single active page at a time).
    """
    if isinstance(raw, str):
        numbered = parse_session_lines(raw)
    else:
        numbered = [(i, rec) for i, rec in enumerate(raw, start=1)]

    events: list[SessionEvent] = []
    malformed: list[MalformedEvent] = []
    unknown = 0
    for position, record in numbered:
        if "__error__" in record:
            malformed.append(MalformedEvent(position, str(record["__error__"])))
            continue
        try:
            kind = EventKind(record.get("kind"))
        except ValueError:
            unknown += 1
            continue
        try:
            events.append(_decode_event(kind, record))
        except (DecodeError, KeyError, TypeError, ValueError) as exc:
            malformed.append(MalformedEvent(position, str(exc)))

    if not events:
        raise EmptyLog("no events parsed from session log")

    events.sort(key=lambda e: e.at)  # stable: ties keep input order
    return SessionLog(tuple(_balance_visits(events, malformed)),
                      tuple(malformed), unknown)


def _decode_event(kind: EventKind, record: Mapping) -> SessionEvent:
    at = parse_ts(record["at"])
    fields = {name: record[name] for name in _KIND_FIELDS[kind]}
    if kind is EventKind.SCROLL:
        fraction = float(fields["visible_fraction"])
        if not 0.0 <= fraction <= 1.0:
            raise ValueError(f"visible_fraction out of range: {fraction}")
        fields["visible_fraction"] = fraction
    return SessionEvent(at=at, kind=kind, **fields)


def _balance_visits(events: list[SessionEvent],
                    malformed: list[MalformedEvent]) -> list[SessionEvent]:
    out: list[SessionEvent] = []
    open_url: str | None = None
    for event in events:
        if event.kind is EventKind.PAGE_ENTER:
            if open_url is not None:
                out.append(SessionEvent(at=event.at, kind=EventKind.PAGE_LEAVE,
                                        url=open_url, synthetic=True))
            open_url = event.url
            out.append(event)
        elif event.kind is EventKind.PAGE_LEAVE:
            if open_url is not None and _same_page(open_url, event.url):
                open_url = None
                out.append(event)
            else:
                malformed.append(MalformedEvent(
                    0, f"page_leave without matching enter: {event.url}"))
        else:
            out.append(event)
    if open_url is not None and out:
        out.append(SessionEvent(at=out[-1].at, kind=EventKind.PAGE_LEAVE,
                                url=open_url, synthetic=True))
    return out


def _same_page(a: str | None, b: str | None) -> bool:
    if a is None or b is None:
        return a == b
    return normalize_url(a) == normalize_url(b)


# --- effort -------------------------------------------------------------


def effective_duration(events: Sequence[SessionEvent],
                       cfg: ThresholdConfig) -> timedelta:
    """Activity time of a sorted segment with idle gaps clamped.

    Each consecutive gap contributes min(gap, idle_threshold); a single
    event yields zero.
    """
    total = timedelta(0)
    for prev, cur in zip(events, events[1:]):
        gap = cur.at - prev.at
        if gap < timedelta(0):
            gap = timedelta(0)
        total += min(gap, cfg.idle_threshold)
    return total


# --- search queries ------------------------------------------------------


@dataclass(frozen=True)
class QueryStat:
    query: str
    ordinal: int              # chronological index from 0
    effective_duration: timedelta
    snippet_count: int


def _query_spans(log: SessionLog) -> list[tuple[int, list[SessionEvent]]]:
    """Half-open spans [query, next query), as (ordinal, events) pairs."""
    spans: list[tuple[int, list[SessionEvent]]] = []
    current: list[SessionEvent] | None = None
    ordinal = -1
    for event in log.events:
        if event.kind is EventKind.QUERY_ISSUED:
            ordinal += 1
            current = [event]
            spans.append((ordinal, current))
        elif current is not None:
            current.append(event)
    return spans


def query_stats(log: SessionLog, table: KnowledgeTable | None = None,
                cfg: ThresholdConfig | None = None) -> list[QueryStat]:
    """One stat per issued query, default-ordered by yield.

    Default order is descending snippet_count with ties broken by ascending
    chronological ordinal; see sort_query_stats for the other orderings.
    """
    cfg = cfg or ThresholdConfig()
    stats = []
    for ordinal, span in _query_spans(log):
        snippet_count = sum(
            1 for e in span if e.kind is EventKind.SNIPPET_COLLECTED)
        stats.append(QueryStat(
            query=span[0].query or "",
            ordinal=ordinal,
            effective_duration=effective_duration(span, cfg),
            snippet_count=snippet_count,
        ))
    return sort_query_stats(stats, "snippets")


def sort_query_stats(stats: Sequence[QueryStat], mode: str) -> list[QueryStat]:
    if mode == "chronological":
        return sorted(stats, key=lambda s: s.ordinal)
    if mode == "duration":
        return sorted(stats, key=lambda s: (-s.effective_duration.total_seconds(),
                                            s.ordinal))
    if mode == "snippets":
        return sorted(stats, key=lambda s: (-s.snippet_count, s.ordinal))
    raise ValueError(f"unknown sort mode: {mode}")


# --- pages ---------------------------------------------------------------


@dataclass(frozen=True)
class PageStat:
    url: str                  # normalized
    effective_duration: timedelta
    max_scroll: float
    snippet_count: int


@dataclass(frozen=True)
class _Visit:
    url: str
    events: list[SessionEvent] = field(default_factory=list)

    @property
    def entered_at(self) -> datetime:
        return self.events[0].at


def _visits(log: SessionLog) -> list[_Visit]:
    """Enter..leave segments; the balanced log guarantees pairing."""
    visits: list[_Visit] = []
    current: _Visit | None = None
    for event in log.events:
        if event.kind is EventKind.PAGE_ENTER:
            current = _Visit(normalize_url(event.url or ""), [event])
            visits.append(current)
        elif event.kind is EventKind.PAGE_LEAVE:
            if current is not None:
                current.events.append(event)
                current = None
        elif current is not None and event.url is not None \
                and normalize_url(event.url) == current.url:
            current.events.append(event)
    return visits


def page_stats(log: SessionLog, cfg: ThresholdConfig | None = None) -> list[PageStat]:
    """One stat per distinct page URL, in order of first visit."""
    cfg = cfg or ThresholdConfig()
    durations: dict[str, timedelta] = {}
    for visit in _visits(log):
        durations[visit.url] = durations.get(visit.url, timedelta(0)) \
            + effective_duration(visit.events, cfg)

    scrolls: dict[str, float] = {}
    counts: dict[str, int] = {}
    for event in log.events:
        if event.url is None:
            continue
        url = normalize_url(event.url)
        if event.kind is EventKind.SCROLL and event.visible_fraction is not None:
            scrolls[url] = max(scrolls.get(url, 0.0), event.visible_fraction)
        elif event.kind is EventKind.SNIPPET_COLLECTED:
            counts[url] = counts.get(url, 0) + 1
        durations.setdefault(url, timedelta(0))

    return [
        PageStat(url=url,
                 effective_duration=duration,
                 max_scroll=scrolls.get(url, 0.0),
                 snippet_count=counts.get(url, 0))
        for url, duration in durations.items()
    ]


# --- timeline ------------------------------------------------------------


@dataclass(frozen=True)
class TimelinePage:
    url: str
    entered_at: datetime
    shade_index: int
    snippet_ids: tuple[str, ...]


@dataclass(frozen=True)
class TimelineQuery:
    query: str | None          # None marks the synthetic "(no query)" node
    at: datetime
    shade_index: int
    pages: tuple[TimelinePage, ...]
    snippet_ids: tuple[str, ...]


@dataclass(frozen=True)
class Timeline:
    entries: tuple[TimelineQuery, ...]

    def node_count(self) -> int:
        return sum(1 + len(q.pages) for q in self.entries)

    def shade_indices(self) -> list[int]:
        out = []
        for q in self.entries:
            out.append(q.shade_index)
            out.extend(p.shade_index for p in q.pages)
        return out


def build_timeline(log: SessionLog, table: KnowledgeTable | None = None) -> Timeline:
    """Two-level chronology: queries first, pages nested under the query
    span where they were entered. Shade indices increase with time
    (lighter = older); pages entered before any query group under a
    synthetic "(no query)" node placed first.
    """
    if not log.events:
        return Timeline(())

    # Partition visits by the query span in which their enter occurred.
    groups: list[dict] = []
    current: dict | None = None
    preface: dict = {"query": None, "at": None, "visits": [], "snippets": []}
    for event in log.events:
        if event.kind is EventKind.QUERY_ISSUED:
            current = {"query": event.query or "", "at": event.at,
                       "visits": [], "snippets": []}
            groups.append(current)
        else:
            target = current if current is not None else preface
            if event.kind is EventKind.PAGE_ENTER:
                target["visits"].append(
                    {"url": normalize_url(event.url or ""),
                     "entered_at": event.at, "snippets": []})
            elif event.kind is EventKind.SNIPPET_COLLECTED:
                target["snippets"].append(event)

    ordered = []
    if preface["visits"] or preface["snippets"]:
        preface["at"] = (preface["visits"] or [{"entered_at": log.events[0].at}])[0].get(
            "entered_at", log.events[0].at)
        ordered.append(preface)
    ordered.extend(groups)

    # Attribute collected snippets to the visit covering them (same page).
    visit_bounds = _visit_intervals(log)
    for group in ordered:
        for event in group["snippets"]:
            url = normalize_url(event.url or "")
            for visit in group["visits"]:
                if visit["url"] != url:
                    continue
                bound = visit_bounds.get((visit["url"], visit["entered_at"]))
                if bound and bound[0] <= event.at <= bound[1]:
                    visit["snippets"].append(event.snippet_id)
                    break

    # Shades: 0..n-1 over all nodes in chronological order; a query node
    # sorts before a page node at the same instant.
    nodes: list[tuple[datetime, int, dict]] = []
    for group in ordered:
        nodes.append((group["at"], 0, group))
        for visit in group["visits"]:
            nodes.append((visit["entered_at"], 1, visit))
    nodes.sort(key=lambda item: (item[0], item[1]))
    for shade, (_, _, node) in enumerate(nodes):
        node["shade"] = shade

    entries = []
    for group in ordered:
        pages = tuple(
            TimelinePage(url=v["url"], entered_at=v["entered_at"],
                         shade_index=v["shade"],
                         snippet_ids=tuple(v["snippets"]))
            for v in group["visits"])
        entries.append(TimelineQuery(
            query=group["query"],
            at=group["at"],
            shade_index=group["shade"],
            pages=pages,
            snippet_ids=tuple(e.snippet_id for e in group["snippets"]),
        ))
    return Timeline(tuple(entries))


def _visit_intervals(log: SessionLog) -> dict[tuple[str, datetime], tuple[datetime, datetime]]:
    bounds = {}
    for visit in _visits(log):
        bounds[(visit.url, visit.entered_at)] = (
            visit.events[0].at, visit.events[-1].at)
    return bounds


# --- chosen option --------------------------------------------------------


@dataclass(frozen=True)
class ChosenOption:
    option_id: str
    confidence: float          # share of attributed copy events
    attributed_copies: int


def infer_chosen_option(log: SessionLog, table: KnowledgeTable,
                        snippets: SnippetStore) -> ChosenOption | None:
    """Copy-event heuristic: a copy counts toward every option whose row
    holds a snippet from the copied page. None when nothing attributes.
    """
    option_urls: dict[str, set[str]] = {}
    for option in table.options:
        urls = set()
        for sid in table.option_snippet_ids(option.id):
            snippet = snippets.get(sid)
            if snippet is not None:
                urls.add(normalize_url(snippet.source_url))
        option_urls[option.id] = urls

    counts = {option.id: 0 for option in table.options}
    attributed = 0
    for event in log.events:
        if event.kind is not EventKind.COPY or event.url is None:
            continue
        url = normalize_url(event.url)
        matched = [oid for oid in counts if url in option_urls[oid]]
        if matched:
            attributed += 1
            for oid in matched:
                counts[oid] += 1

    if attributed == 0:
        return None
    # Ties break by table option order (counts preserves insertion order).
    best = max(counts, key=lambda oid: counts[oid])
    return ChosenOption(option_id=best,
                        confidence=counts[best] / attributed,
                        attributed_copies=attributed)


# --- summary ---------------------------------------------------------------


@dataclass(frozen=True)
class TaskSummary:
    total_effective_duration: timedelta
    last_updated_age: timedelta
    option_count: int
    criterion_count: int
    evidence_count: int


def task_summary(log: SessionLog | None, table: KnowledgeTable,
                 now: datetime, cfg: ThresholdConfig | None = None) -> TaskSummary:
    cfg = cfg or ThresholdConfig()
    events = log.events if log else ()
    total = effective_duration(events, cfg) if events else timedelta(0)
    last_updated = table.updated_at
    if events and events[-1].at > last_updated:
        last_updated = events[-1].at
    if now < last_updated:
        raise NowBeforeData(
            f"now {now.isoformat()} precedes last update {last_updated.isoformat()}")
    return TaskSummary(
        total_effective_duration=total,
        last_updated_age=now - last_updated,
        option_count=len(table.options),
        criterion_count=len(table.criteria),
        evidence_count=len(table.placements()),
    )
