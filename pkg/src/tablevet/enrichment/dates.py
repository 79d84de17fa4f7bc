"""Last-updated extraction from captured page content.

A per-domain plugin handles Q&A pages (edit time of the containing answer);
everything else goes through a generic scan of structured date metadata and
visible date strings. All candidates are filtered to plausible values not
after the capture time, and the most recent survivor wins.
"""

from __future__ import annotations

import json
import re
from datetime import datetime, timezone

from ..domains import extract_domain, InvalidUrl
from ..htmldoc import HtmlElement, parse_html

_META_DATE_KEYS = {
    "article:modified_time", "article:published_time", "og:updated_time",
    "last-modified", "date", "dc.date.modified", "dcterms.modified",
    "revised", "article:published", "datePublished", "dateModified",
}

_MONTHS = {
    name.lower(): i + 1
    for i, name in enumerate(
        ["January", "February", "March", "April", "May", "June", "July",
         "August", "September", "October", "November", "December"])
}
for _name, _num in list(_MONTHS.items()):
    _MONTHS[_name[:3]] = _num

_ISO_DATE = re.compile(r"\b(\d{4})-(\d{2})-(\d{2})(?:[T ](\d{2}):(\d{2})(?::(\d{2}))?)?")
_LONG_DATE = re.compile(
    r"\b([A-Za-z]{3,9})\.?\s+(\d{1,2})(?:st|nd|rd|th)?,?\s+(\d{4})\b")
_DAY_FIRST = re.compile(r"\b(\d{1,2})\s+([A-Za-z]{3,9})\.?,?\s+(\d{4})\b")

_MIN_PLAUSIBLE = datetime(1995, 1, 1, tzinfo=timezone.utc)


def parse_date_loose(text: str) -> datetime | None:
    """First recognizable date in a short string, as a UTC datetime."""
    text = text.strip()
    m = _ISO_DATE.search(text)
    if m:
        y, mo, d = int(m.group(1)), int(m.group(2)), int(m.group(3))
        hh = int(m.group(4) or 0)
        mm = int(m.group(5) or 0)
        ss = int(m.group(6) or 0)
        try:
            return datetime(y, mo, d, hh, mm, ss, tzinfo=timezone.utc)
        except ValueError:
            return None
    m = _LONG_DATE.search(text)
    if m:
        month = _MONTHS.get(m.group(1).lower())
        if month:
            try:
                return datetime(int(m.group(3)), month, int(m.group(2)),
                                tzinfo=timezone.utc)
            except ValueError:
                return None
    m = _DAY_FIRST.search(text)
    if m:
        month = _MONTHS.get(m.group(2).lower())
        if month:
            try:
                return datetime(int(m.group(3)), month, int(m.group(1)),
                                tzinfo=timezone.utc)
            except ValueError:
                return None
    return None


def _plausible(candidates: list[datetime], as_of: datetime | None) -> datetime | None:
    valid = [c for c in candidates if c >= _MIN_PLAUSIBLE]
    if as_of is not None:
        valid = [c for c in valid if c <= as_of]
    return max(valid) if valid else None


def _generic_candidates(root: HtmlElement) -> list[datetime]:
    found: list[datetime] = []

    for meta in root.find_by_tag("meta"):
        key = (meta.get("property") or meta.get("name") or "").strip()
        if key.lower() in {k.lower() for k in _META_DATE_KEYS}:
            parsed = parse_date_loose(meta.get("content") or "")
            if parsed:
                found.append(parsed)

    for el in root.find_by_tag("time"):
        parsed = parse_date_loose(el.get("datetime") or el.text())
        if parsed:
            found.append(parsed)

    for script in root.find_by_tag("script"):
        if (script.get("type") or "").strip() != "application/ld+json":
            continue
        try:
            data = json.loads(script.own_text())
        except (json.JSONDecodeError, ValueError):
            continue
        for obj in data if isinstance(data, list) else [data]:
            if not isinstance(obj, dict):
                continue
            for key in ("dateModified", "datePublished"):
                if key in obj and isinstance(obj[key], str):
                    parsed = parse_date_loose(obj[key])
                    if parsed:
                        found.append(parsed)

    # Visible strings near update markers ("Updated on March 3, 2020" etc.).
    text = root.text()
    for marker in re.finditer(
            r"(?:updated|modified|edited|published|posted|revised)\b[^.]{0,40}",
            text, flags=re.IGNORECASE):
        parsed = parse_date_loose(marker.group())
        if parsed:
            found.append(parsed)
    return found


# --- Q&A plugin ---------------------------------------------------------


def _answer_blocks(root: HtmlElement) -> list[HtmlElement]:
    return root.find_all(
        lambda el: el.tag in ("div", "article", "section") and el.has_class("answer"))


def pick_answer_block(root: HtmlElement, anchor_text: str | None) -> HtmlElement | None:
    """The answer containing the anchor text; else accepted, else first."""
    answers = _answer_blocks(root)
    if not answers:
        return None
    if anchor_text:
        needle = " ".join(anchor_text.split())
        for block in answers:
            if needle and needle in block.text():
                return block
    for block in answers:
        if block.has_class("accepted-answer"):
            return block
    return answers[0]


def _qa_last_updated(root: HtmlElement, anchor_text: str | None) -> list[datetime]:
    block = pick_answer_block(root, anchor_text)
    if block is None:
        return []
    found: list[datetime] = []
    for el in block.iter():
        if el.has_class("relativetime"):
            parsed = parse_date_loose(el.get("title") or el.text())
            if parsed:
                found.append(parsed)
        elif el.tag == "time":
            parsed = parse_date_loose(el.get("datetime") or el.text())
            if parsed:
                found.append(parsed)
    if not found:
        parsed = parse_date_loose(block.text())
        if parsed:
            found.append(parsed)
    return found


QA_DOMAINS = frozenset({
    "stackoverflow.com", "stackexchange.com", "superuser.com", "serverfault.com",
    "askubuntu.com", "mathoverflow.net",
})


def extract_last_updated(page: str, url: str,
                         as_of: datetime | None = None,
                         anchor_text: str | None = None) -> datetime | None:
    """Most recent plausible update time of the page (or of the containing
    answer post on Q&A domains), never after ``as_of``; None when nothing
    credible is found.
    """
    if not page:
        return None
    try:
        domain = extract_domain(url)
    except InvalidUrl:
        domain = ""
    root = parse_html(page)
    candidates: list[datetime] = []
    if domain in QA_DOMAINS:
        candidates = _qa_last_updated(root, anchor_text)
    if not candidates:
        candidates = _generic_candidates(root)
    return _plausible(candidates, as_of)
