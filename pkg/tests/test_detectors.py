"""Detector registry, keyword matching, and version extraction."""

from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tablevet.enrichment.detectors import (
    VERSION_GRAMMAR,
    Detector,
    DetectorRegistry,
    RegistryError,
    detect_platforms,
    detect_with_versions,
    extract_version,
    keyword_occurrences,
)
from tablevet.model import Snippet, ThresholdConfig

T0 = datetime(2021, 1, 15, tzinfo=timezone.utc)
CFG = ThresholdConfig()


def snippet_of(text: str, url: str = "https://example.com/post") -> Snippet:
    return Snippet.create(id="s", content=f"<p>{text}</p>", source_url=url,
                          collected_at=T0)


@pytest.fixture(scope="module")
def registry():
    from tablevet.enrichment.detectors import default_registry
    return default_registry()


class TestRegistry:
    def test_default_has_thirty_detectors(self, registry):
        assert len(registry) == 30
        categories = {d.category for d in registry}
        assert categories == {"language", "framework", "platform"}

    def test_rejects_ambiguous_keyword(self):
        with pytest.raises(RegistryError, match="ambiguous keyword '\\$'"):
            DetectorRegistry([
                Detector("PHP", "language", ("$",)),
                Detector("jQuery", "framework", ("$",)),
            ])

    def test_rejects_empty_keywords(self):
        with pytest.raises(RegistryError, match="empty keyword set"):
            DetectorRegistry([Detector("X", "language", ())])

    def test_rejects_unknown_category(self):
        with pytest.raises(RegistryError, match="unknown category"):
            DetectorRegistry([Detector("X", "tool", ("x",))])

    def test_rejects_pattern_without_group(self):
        with pytest.raises(RegistryError, match="capture group"):
            DetectorRegistry([
                Detector("X", "language", ("xkw",),
                         version_url_patterns=(r"/v\d+/",)),
            ])

    def test_load_rejects_duplicates_across_files(self, tmp_path):
        path = tmp_path / "registry.json"
        path.write_text(
            '[{"name": "A", "category": "language", "keywords": ["shared"]},'
            ' {"name": "B", "category": "framework", "keywords": ["shared"]}]')
        with pytest.raises(RegistryError, match="shared"):
            DetectorRegistry.load(path)


class TestMatching:
    def test_javascript_keywords(self, registry):
        results = detect_platforms(
            snippet_of("console.log(x); setTimeout(f, 0)"), "", registry)
        assert [(r.detector_name, r.source) for r in results] \
            == [("JavaScript", "snippet")]

    def test_snippet_wins_over_parent(self, registry):
        results = detect_platforms(
            snippet_of("we call useState in the handler"),
            "the parent page mentions componentDidMount", registry)
        reacts = [r for r in results if r.detector_name == "React"]
        assert len(reacts) == 1
        assert reacts[0].source == "snippet"
        assert reacts[0].matched_keyword == "useState"

    def test_parent_fallback_per_detector(self, registry):
        results = detect_platforms(
            snippet_of("plain prose with no code tokens at all"),
            "the parent says componentDidMount somewhere", registry)
        assert [(r.detector_name, r.source) for r in results] \
            == [("React", "parent_page")]

    def test_no_hits_anywhere(self, registry):
        assert detect_platforms(snippet_of("just words"), "more words",
                                registry) == []

    def test_token_boundaries_case_sensitive(self):
        assert keyword_occurrences("useStateful hooks", "useState") == []
        assert keyword_occurrences("call useState now", "useState") == [(5, 13)]
        assert keyword_occurrences("USESTATE", "useState") == []
        # keywords with non-word edges anchor on the word-char side only
        assert keyword_occurrences("file.py here", ".py") == [(4, 7)]
        assert keyword_occurrences("file.pyc here", ".py") == []

    def test_detector_never_reported_twice(self, registry):
        results = detect_platforms(
            snippet_of("console.log and setTimeout and es6"), "", registry)
        names = [r.detector_name for r in results]
        assert len(names) == len(set(names))


class TestVersionExtraction:
    def test_version_after_name(self, registry):
        snippet = snippet_of("you should migrate to Angular 9 today")
        [detection] = detect_platforms(snippet, "", registry)
        version = extract_version(detection, snippet.plain_text,
                                  snippet.source_url, CFG, registry)
        assert version == "9"

    def test_dotted_versions(self, registry):
        for text, expected in [("I run Python 3.5 here", "3.5"),
                               ("React 16.13.1 shipped", "16.13.1")]:
            snippet = snippet_of(text)
            detections = detect_platforms(snippet, "", registry)
            wanted = [d for d in detections
                      if d.detector_name in ("Python", "React")][0]
            assert extract_version(wanted, snippet.plain_text,
                                   snippet.source_url, CFG, registry) == expected

    def test_url_pattern_fallback(self, registry):
        snippet = snippet_of("see the Java docs for ArrayList",
                             url="https://docs.oracle.com/javase/8/docs/api/")
        [detection] = detect_platforms(snippet, "", registry)
        assert detection.detector_name == "Java"
        assert extract_version(detection, snippet.plain_text,
                               snippet.source_url, CFG, registry) == "8"

    def test_none_when_nothing_matches(self, registry):
        snippet = snippet_of("plain Java prose without digits")
        [detection] = detect_platforms(snippet, "", registry)
        assert extract_version(detection, snippet.plain_text,
                               snippet.source_url, CFG, registry) is None

    def test_vicinity_window_limits(self, registry):
        far = "Angular " + ("x" * 40) + " 9"
        snippet = snippet_of(far)
        [detection] = detect_platforms(snippet, "", registry)
        assert extract_version(detection, snippet.plain_text,
                               snippet.source_url, CFG, registry) is None

    def test_equidistant_prefers_following(self, registry):
        text = "7 Angular 9"   # both tokens one space away
        snippet = snippet_of(text)
        [detection] = detect_platforms(snippet, "", registry)
        assert extract_version(detection, snippet.plain_text,
                               snippet.source_url, CFG, registry) == "9"

    def test_digits_glued_to_words_are_not_versions(self, registry):
        snippet = snippet_of("es7 rocks")  # the 7 belongs to the keyword
        [detection] = detect_platforms(snippet, "", registry)
        assert detection.detector_name == "JavaScript"
        assert extract_version(detection, snippet.plain_text,
                               snippet.source_url, CFG, registry) is None

    @given(st.text(alphabet="abc 0123456789.XYZ(),;", max_size=60))
    @settings(max_examples=80, deadline=None)
    def test_output_always_matches_version_grammar(self, registry, noise):
        text = f"Angular {noise}"
        snippet = snippet_of(text)
        detections = detect_platforms(snippet, "", registry)
        for detection in detections:
            version = extract_version(detection, snippet.plain_text,
                                      snippet.source_url, CFG, registry)
            if version is not None:
                assert VERSION_GRAMMAR.match(version)

    def test_detect_with_versions_uses_matching_source_text(self, registry):
        snippet = snippet_of("no tokens in the snippet itself")
        parent = "the parent page recommends Angular 9 loudly"
        results = detect_with_versions(snippet, parent, registry, CFG)
        angular = [r for r in results if r.detector_name == "Angular"][0]
        assert angular.source == "parent_page"
        assert angular.version == "9"
