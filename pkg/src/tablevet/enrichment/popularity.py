"""Popularity signals from captured pages, per-domain plugins only.

Heuristics are tied to the current markup of the supported sites and are
exercised exclusively against bundled fixture pages, never live sites.
"""

from __future__ import annotations

import re

from ..htmldoc import HtmlElement, parse_html
from ..model import PopularitySignal
from .dates import pick_answer_block

_COUNT = re.compile(r"(-?\d[\d,.]*)\s*([kKmM]?)")


def _parse_count(text: str) -> int | None:
    m = _COUNT.search(text.strip())
    if not m:
        return None
    raw, suffix = m.group(1), m.group(2).lower()
    multiplier = {"k": 1000, "m": 1000000}.get(suffix, 1)
    try:
        if multiplier > 1:
            return int(float(raw.replace(",", "")) * multiplier)
        return int(raw.replace(",", "").replace(".", ""))
    except ValueError:
        return None


def _qa_upvotes(page: str, domain: str, anchor_text: str | None) -> PopularitySignal | None:
    root = parse_html(page)
    block = pick_answer_block(root, anchor_text)
    if block is None:
        return None
    count: int | None = None
    for el in block.iter():
        if el.get("itemprop") == "upvoteCount" or el.has_class("js-vote-count") \
                or el.has_class("vote-count-post"):
            raw = el.get("data-value")
            count = _parse_count(raw) if raw else _parse_count(el.text())
            break
    if count is None:
        return None
    accepted = block.has_class("accepted-answer") or any(
        el.has_class("js-accepted-answer-indicator") and not el.has_class("d-none")
        for el in block.iter())
    return PopularitySignal(kind="upvotes", count=count, accepted=accepted,
                            extracted_from=domain)


def _article_claps(page: str, domain: str, anchor_text: str | None) -> PopularitySignal | None:
    root = parse_html(page)

    def is_clap_marker(el: HtmlElement) -> bool:
        blob = " ".join([*el.classes, el.get("data-testid") or "",
                         el.get("aria-label") or ""]).lower()
        return "clap" in blob

    for el in root.find_all(is_clap_marker):
        count = _parse_count(el.text())
        if count is not None and count >= 0:
            return PopularitySignal(kind="claps", count=count,
                                    extracted_from=domain)
    return None


_PLUGINS = {
    "stackoverflow.com": _qa_upvotes,
    "stackexchange.com": _qa_upvotes,
    "superuser.com": _qa_upvotes,
    "serverfault.com": _qa_upvotes,
    "medium.com": _article_claps,
}


def extract_popularity(page: str, domain: str,
                       anchor_text: str | None = None) -> PopularitySignal | None:
    """Dispatch to the per-domain plugin; None without a plugin or a value."""
    if not page:
        return None
    plugin = _PLUGINS.get(domain)
    if plugin is None:
        return None
    return plugin(page, domain, anchor_text)
