"""Keyword detectors for languages, frameworks, and platforms.

Each detector is a named set of hand-picked keywords (statements, special
variables, tool invocations) that uniquely identify one technology.
Matching is case-sensitive and token-boundary delimited: "useStateful"
never matches the keyword "useState". The registry file is plain JSON so
new detectors are a file drop, not a code change; loading rejects any
keyword claimed by two detectors.
"""

from __future__ import annotations

import json
import re
import string
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence
from urllib.parse import urlsplit

from ..model import DetectionResult, Snippet, ThresholdConfig

CATEGORIES = ("language", "framework", "platform")

_WORD_CHARS = frozenset(string.ascii_letters + string.digits + "_")

# Version tokens: digits and dots ("9", "3.5", "16.13.1"), not glued to a
# word character or a leading dot.
_VERSION_TOKEN = re.compile(r"(?<![\w.])\d+(?:\.\d+)*(?!\w)")
VERSION_GRAMMAR = re.compile(r"^\d+(?:\.\d+)*$")


class RegistryError(ValueError):
    """The registry file violates a detector invariant."""


@dataclass(frozen=True)
class Detector:
    name: str
    category: str
    keywords: tuple[str, ...]
    version_url_patterns: tuple[str, ...] = ()


class DetectorRegistry:
    def __init__(self, detectors: Sequence[Detector]):
        self.detectors: tuple[Detector, ...] = tuple(detectors)
        self._by_name = {d.name: d for d in self.detectors}
        self._validate()

    def _validate(self) -> None:
        if len(self._by_name) != len(self.detectors):
            names = [d.name for d in self.detectors]
            dup = next(n for n in names if names.count(n) > 1)
            raise RegistryError(f"duplicate detector name: {dup}")
        claimed: dict[str, str] = {}
        for detector in self.detectors:
            if detector.category not in CATEGORIES:
                raise RegistryError(
                    f"{detector.name}: unknown category {detector.category!r}")
            if not detector.keywords:
                raise RegistryError(f"{detector.name}: empty keyword set")
            for keyword in detector.keywords:
                if not keyword:
                    raise RegistryError(f"{detector.name}: blank keyword")
                owner = claimed.get(keyword)
                if owner is not None:
                    raise RegistryError(
                        f"ambiguous keyword {keyword!r} claimed by both "
                        f"{owner} and {detector.name}")
                claimed[keyword] = detector.name
            for pattern in detector.version_url_patterns:
                try:
                    compiled = re.compile(pattern)
                except re.error as exc:
                    raise RegistryError(
                        f"{detector.name}: bad URL pattern {pattern!r}: {exc}")
                if compiled.groups < 1:
                    raise RegistryError(
                        f"{detector.name}: URL pattern {pattern!r} needs a "
                        f"capture group for the version")

    def get(self, name: str) -> Detector | None:
        return self._by_name.get(name)

    def __iter__(self):
        return iter(self.detectors)

    def __len__(self) -> int:
        return len(self.detectors)

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "DetectorRegistry":
        detectors = []
        for record in records:
            try:
                detectors.append(Detector(
                    name=record["name"],
                    category=record["category"],
                    keywords=tuple(record["keywords"]),
                    version_url_patterns=tuple(record.get("version_url_patterns", ())),
                ))
            except (KeyError, TypeError) as exc:
                raise RegistryError(f"bad detector record {record!r}: {exc}")
        return cls(detectors)

    @classmethod
    def load(cls, path: str | Path) -> "DetectorRegistry":
        try:
            records = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise RegistryError(f"cannot read registry {path}: {exc}")
        if not isinstance(records, list):
            raise RegistryError(f"registry {path} must be a JSON list")
        return cls.from_records(records)


_default_registry: DetectorRegistry | None = None


def default_registry() -> DetectorRegistry:
    global _default_registry
    if _default_registry is None:
        path = Path(__file__).resolve().parent.parent / "data" / "default_detectors.json"
        _default_registry = DetectorRegistry.load(path)
    return _default_registry


# --- matching ---------------------------------------------------------------


def keyword_occurrences(text: str, keyword: str) -> list[tuple[int, int]]:
    """Case-sensitive occurrences with token boundaries on word-char edges."""
    spans = []
    start = 0
    while True:
        idx = text.find(keyword, start)
        if idx < 0:
            break
        end = idx + len(keyword)
        ok = True
        if keyword[0] in _WORD_CHARS and idx > 0 and text[idx - 1] in _WORD_CHARS:
            ok = False
        if keyword[-1] in _WORD_CHARS and end < len(text) and text[end] in _WORD_CHARS:
            ok = False
        if ok:
            spans.append((idx, end))
        start = idx + 1
    return spans


def _first_match(text: str, detector: Detector) -> str | None:
    for keyword in detector.keywords:
        if keyword_occurrences(text, keyword):
            return keyword
    return None


def detect_in_text(text: str, registry: DetectorRegistry,
                   source: str = "snippet") -> list[DetectionResult]:
    """One DetectionResult per detector with a keyword hit in the text."""
    results = []
    for detector in registry:
        keyword = _first_match(text, detector)
        if keyword is not None:
            results.append(DetectionResult(
                detector_name=detector.name, category=detector.category,
                matched_keyword=keyword, source=source))
    return results


def detect_platforms(snippet: Snippet, parent_page_text: str,
                     registry: DetectorRegistry) -> list[DetectionResult]:
    """Match detectors against the snippet text, falling back per detector
    to the parent page when the snippet itself has no hit. Each detector is
    reported at most once, preferring the snippet as the source.
    """
    results: list[DetectionResult] = []
    snippet_text = snippet.plain_text
    for detector in registry:
        keyword = _first_match(snippet_text, detector)
        if keyword is not None:
            results.append(DetectionResult(
                detector_name=detector.name, category=detector.category,
                matched_keyword=keyword, source="snippet"))
            continue
        if parent_page_text:
            keyword = _first_match(parent_page_text, detector)
            if keyword is not None:
                results.append(DetectionResult(
                    detector_name=detector.name, category=detector.category,
                    matched_keyword=keyword, source="parent_page"))
    return results


def extract_version(detection: DetectionResult, text: str, url: str,
                    cfg: ThresholdConfig,
                    registry: DetectorRegistry | None = None) -> str | None:
    """Nearest version token around the detector name or matched keyword;
    URL path patterns are the fallback. Equidistant candidates prefer the
    token following the keyword ("Angular 9" convention).
    """
    anchors: list[tuple[int, int]] = []
    for needle in {detection.matched_keyword, detection.detector_name}:
        anchors.extend(keyword_occurrences(text, needle))
    candidates: list[tuple[int, int, int, str]] = []  # (dist, after?, pos, token)
    if anchors:
        for match in _VERSION_TOKEN.finditer(text):
            vstart, vend = match.start(), match.end()
            for (astart, aend) in anchors:
                if vstart >= aend:
                    dist = vstart - aend
                    side = 0  # after the keyword: wins ties
                elif vend <= astart:
                    dist = astart - vend
                    side = 1
                else:
                    continue  # overlapping (digits inside the keyword)
                if dist <= cfg.version_vicinity:
                    candidates.append((dist, side, vstart, match.group()))
    if candidates:
        candidates.sort()
        return candidates[0][3]

    if registry is not None:
        detector = registry.get(detection.detector_name)
        if detector is not None and detector.version_url_patterns:
            path = urlsplit(url).path if url else ""
            for pattern in detector.version_url_patterns:
                found = re.search(pattern, path)
                if found and found.group(1) and VERSION_GRAMMAR.match(found.group(1)):
                    return found.group(1)
    return None


def detect_with_versions(snippet: Snippet, parent_page_text: str,
                         registry: DetectorRegistry,
                         cfg: ThresholdConfig) -> list[DetectionResult]:
    """detect_platforms plus version extraction from the matching source text."""
    detections = detect_platforms(snippet, parent_page_text, registry)
    out = []
    for detection in detections:
        text = snippet.plain_text if detection.source == "snippet" else parent_page_text
        version = extract_version(detection, text, snippet.source_url, cfg, registry)
        out.append(replace(detection, version=version))
    return out
