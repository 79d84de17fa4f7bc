"""Code-example extraction from snippet markup."""

from __future__ import annotations

from ..htmldoc import parse_html
from ..model import CodeExample, Snippet
from .detectors import DetectorRegistry, detect_in_text

# Standalone <code> spans shorter than this and without a newline are taken
# as inline mentions, not examples.
_INLINE_CODE_MAX = 30


def _blocks_in(markup: str) -> list[str]:
    root = parse_html(markup)
    texts: list[str] = []
    pres = set()
    for el in root.iter():
        if el.tag == "pre":
            pres.update(id(child) for child in el.iter())
            text = el.raw_text().strip("\n").rstrip()
            if text.strip():
                texts.append(text)
        elif el.tag == "code" and id(el) not in pres:
            text = el.raw_text().strip()
            if text and ("\n" in text or len(text) >= _INLINE_CODE_MAX):
                texts.append(text)
    return texts


def _hint_for(text: str, registry: DetectorRegistry) -> str | None:
    detections = detect_in_text(" ".join(text.split()), registry)
    for detection in detections:
        if detection.category == "language":
            return detection.detector_name
    return detections[0].detector_name if detections else None


def extract_code_examples(snippet: Snippet,
                          registry: DetectorRegistry) -> list[CodeExample]:
    """Preformatted/code-marked blocks from the snippet content and, when
    present, its context snapshot; document order, duplicates dropped.
    """
    texts = _blocks_in(snippet.content)
    if snippet.context_snapshot:
        seen = set(texts)
        for text in _blocks_in(snippet.context_snapshot.surroundings):
            if text not in seen:
                texts.append(text)
                seen.add(text)
    return [
        CodeExample(text=text,
                    language_hint=_hint_for(text, registry),
                    origin_snippet=snippet.id)
        for text in texts
    ]
