"""Small HTML element tree on top of the stdlib parser.

Captured page content arrives as markup strings; this module turns them into
a walkable tree good enough for the extractors (text projection, class/attr
lookups, subtree removal, re-serialization). It is not a browser: malformed
nesting is repaired by popping to the nearest open tag.
"""

from __future__ import annotations

import re
from html import escape
from html.parser import HTMLParser

VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
}

# Content of these never contributes to the text projection.
NON_TEXT_TAGS = {"script", "style", "noscript", "template"}

# Tags that imply a word break when flattening to text.
BLOCK_TAGS = {
    "address", "article", "aside", "blockquote", "body", "br", "caption",
    "dd", "div", "dl", "dt", "fieldset", "figcaption", "figure", "footer",
    "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "html",
    "li", "main", "nav", "ol", "option", "p", "pre", "section", "table",
    "tbody", "td", "tfoot", "th", "thead", "title", "tr", "ul",
}

_WS = re.compile(r"\s+")


class HtmlElement:
    """One element node; children are HtmlElement or plain-text strings."""

    __slots__ = ("tag", "attrs", "children", "parent")

    def __init__(self, tag: str, attrs: dict[str, str] | None = None):
        self.tag = tag
        self.attrs: dict[str, str] = attrs or {}
        self.children: list[HtmlElement | str] = []
        self.parent: HtmlElement | None = None

    # -- structure ---------------------------------------------------------

    def append(self, child: "HtmlElement | str") -> None:
        if isinstance(child, HtmlElement):
            child.parent = self
        self.children.append(child)

    def remove_child(self, child: "HtmlElement") -> None:
        self.children = [c for c in self.children if c is not child]

    def iter(self):
        """Depth-first over elements, self included."""
        yield self
        for child in self.children:
            if isinstance(child, HtmlElement):
                yield from child.iter()

    def ancestors(self):
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    # -- queries -----------------------------------------------------------

    @property
    def classes(self) -> list[str]:
        return self.attrs.get("class", "").split()

    def get(self, name: str, default: str | None = None) -> str | None:
        return self.attrs.get(name, default)

    def find_all(self, pred) -> list["HtmlElement"]:
        return [el for el in self.iter() if pred(el)]

    def find(self, pred) -> "HtmlElement | None":
        for el in self.iter():
            if pred(el):
                return el
        return None

    def find_by_tag(self, *tags: str) -> list["HtmlElement"]:
        wanted = set(tags)
        return self.find_all(lambda el: el.tag in wanted)

    def has_class(self, name: str) -> bool:
        return name in self.classes

    # -- text --------------------------------------------------------------

    def raw_text(self) -> str:
        """Verbatim text content, whitespace preserved (for code blocks)."""
        parts: list[str] = []
        self._collect_raw(parts)
        return "".join(parts)

    def own_text(self) -> str:
        """Direct text children only (e.g. the body of a <script>)."""
        return "".join(c for c in self.children if isinstance(c, str))

    def _collect_raw(self, parts: list[str]) -> None:
        if self.tag in NON_TEXT_TAGS:
            return
        for child in self.children:
            if isinstance(child, str):
                parts.append(child)
            else:
                child._collect_raw(parts)

    def text(self) -> str:
        """Whitespace-collapsed text with word breaks at block boundaries."""
        parts: list[str] = []
        self._collect_text(parts)
        return _WS.sub(" ", "".join(parts)).strip()

    def _collect_text(self, parts: list[str]) -> None:
        if self.tag in NON_TEXT_TAGS:
            return
        if self.tag in BLOCK_TAGS:
            parts.append(" ")
        for child in self.children:
            if isinstance(child, str):
                parts.append(child)
            else:
                child._collect_text(parts)
        if self.tag in BLOCK_TAGS:
            parts.append(" ")

    # -- serialization -----------------------------------------------------

    def to_html(self) -> str:
        parts: list[str] = []
        self._serialize(parts)
        return "".join(parts)

    def _serialize(self, parts: list[str]) -> None:
        if self.tag != "[root]":
            attrs = "".join(
                f' {k}="{escape(v, quote=True)}"' for k, v in self.attrs.items()
            )
            parts.append(f"<{self.tag}{attrs}>")
        for child in self.children:
            if isinstance(child, str):
                parts.append(escape(child, quote=False))
            else:
                child._serialize(parts)
        if self.tag != "[root]" and self.tag not in VOID_TAGS:
            parts.append(f"</{self.tag}>")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<HtmlElement {self.tag} classes={self.classes}>"


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = HtmlElement("[root]")
        self.stack = [self.root]

    def handle_starttag(self, tag, attrs):
        el = HtmlElement(tag, {k: (v if v is not None else "") for k, v in attrs})
        self.stack[-1].append(el)
        if tag not in VOID_TAGS:
            self.stack.append(el)

    def handle_startendtag(self, tag, attrs):
        el = HtmlElement(tag, {k: (v if v is not None else "") for k, v in attrs})
        self.stack[-1].append(el)

    def handle_endtag(self, tag):
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return
        # stray end tag: ignore

    def handle_data(self, data):
        if data:
            self.stack[-1].append(data)


def parse_html(markup: str) -> HtmlElement:
    builder = _TreeBuilder()
    builder.feed(markup or "")
    builder.close()
    return builder.root


def html_to_text(markup: str) -> str:
    """Plain-text projection: tags stripped, entities decoded, whitespace
    collapsed to single spaces."""
    return parse_html(markup).text()
