"""Context-snapshot construction: the surroundings of a collected snippet.

The surroundings default to the captured page's main content with injected
regions (ads, banners, popups) removed. On Q&A domains the enclosing answer
block plus the original question block are always included, whether or not
they fall inside those bounds.
"""

from __future__ import annotations

import re

from ..htmldoc import HtmlElement, parse_html
from ..model import ContextSnapshot
from .dates import QA_DOMAINS

_WS = re.compile(r"\s+")

_INJECTED = re.compile(
    r"(^|[-_ ])(ad|ads|advert|advertisement|adsense|sponsor|sponsored|promo"
    r"|banner|injected|popup|cookie|newsletter|subscribe|tracking)([-_ ]|$)",
    re.IGNORECASE)

_STRIP_TAGS = {"script", "style", "noscript", "iframe", "nav", "aside"}

_MAIN_SELECTORS = (
    lambda el: el.tag == "main",
    lambda el: el.tag == "article",
    lambda el: el.get("role") == "main",
    lambda el: el.get("id") in ("content", "main", "mainbar", "main-content"),
    lambda el: el.has_class("main-content") or el.has_class("post-content"),
)


class SelectionNotFound(ValueError):
    """The selection location cannot be resolved within the page."""


def _collapse(text: str) -> str:
    return _WS.sub(" ", text).strip()


def _containing_element(root: HtmlElement, needle: str) -> HtmlElement | None:
    """Deepest element whose collapsed text contains the needle."""
    best: HtmlElement | None = None
    for el in root.iter():
        if needle in el.text():
            best = el  # iter() is depth-first, later hits are deeper or later
    if best is None:
        return None
    # Walk down while exactly one child still contains the needle.
    node = best
    while True:
        containing = [c for c in node.children
                      if isinstance(c, HtmlElement) and needle in c.text()]
        if len(containing) == 1:
            node = containing[0]
        else:
            return node


def _is_injected(el: HtmlElement) -> bool:
    if el.tag in _STRIP_TAGS:
        return True
    blob = " ".join([el.get("id") or "", *el.classes])
    return bool(blob and _INJECTED.search(blob))


def _prune(el: HtmlElement, keep: set[int]) -> None:
    """Drop injected subtrees, never removing an ancestor of the selection."""
    for child in [c for c in el.children if isinstance(c, HtmlElement)]:
        if id(child) in keep:
            _prune(child, keep)
        elif _is_injected(child):
            el.remove_child(child)
        else:
            _prune(child, keep)


def _main_region(root: HtmlElement, sel_el: HtmlElement) -> HtmlElement:
    for selector in _MAIN_SELECTORS:
        for el in root.iter():
            if selector(el) and (el is sel_el or _is_ancestor(el, sel_el)):
                return el
    body = root.find(lambda el: el.tag == "body")
    return body if body is not None else root


def _is_ancestor(el: HtmlElement, node: HtmlElement) -> bool:
    return any(anc is el for anc in node.ancestors())


def _enclosing(node: HtmlElement, pred) -> HtmlElement | None:
    if pred(node):
        return node
    for anc in node.ancestors():
        if pred(anc):
            return anc
    return None


def snapshot_bounds(page: str, selection: str, domain: str) -> ContextSnapshot:
    """Build the context snapshot for a selection (given as its exact text).

    Raises SelectionNotFound when the text does not resolve within the page.
    """
    needle = _collapse(selection)
    if not needle:
        raise SelectionNotFound("empty selection")
    root = parse_html(page)
    sel_el = _containing_element(root, needle)
    if sel_el is None:
        raise SelectionNotFound(f"selection not found in page: {needle[:60]!r}")

    keep = {id(sel_el)} | {id(anc) for anc in sel_el.ancestors()}

    includes_question = False
    if domain in QA_DOMAINS:
        answer = _enclosing(sel_el, lambda el: el.has_class("answer"))
        question = root.find(
            lambda el: el.has_class("question") or el.get("id") == "question")
        blocks: list[HtmlElement] = []
        if question is not None and (answer is None or question is not answer):
            blocks.append(question)
            includes_question = True
        if answer is not None:
            blocks.append(answer)
        if not blocks:
            blocks = [_main_region(root, sel_el)]
        for block in blocks:
            _prune(block, keep)
        surroundings = "\n".join(b.to_html() for b in blocks)
    else:
        region = _main_region(root, sel_el)
        _prune(region, keep)
        surroundings = region.to_html()

    plain = parse_html(surroundings).text()
    start = plain.find(needle)
    if start < 0:
        raise SelectionNotFound("selection lost while bounding surroundings")
    return ContextSnapshot(
        surroundings=surroundings,
        highlight_start=start,
        highlight_end=start + len(needle),
        includes_question_block=includes_question,
    )
