"""Core model: validation and serialization round-trips."""

from datetime import datetime, timedelta, timezone

import pytest

from tablevet.codec import (
    decode_snippet,
    decode_table,
    encode_snippet,
    encode_table,
    format_ts,
    parse_ts,
)
from tablevet.model import (
    ContextSnapshot,
    Criterion,
    EnrichmentSignals,
    DetectionResult,
    KnowledgeTable,
    Option,
    PopularitySignal,
    Rating,
    Snippet,
    SnippetStore,
    ThresholdConfig,
    validate_table,
)

T0 = datetime(2021, 1, 15, 10, 0, tzinfo=timezone.utc)


def make_snippet(sid, rating=Rating.POSITIVE, url="https://stackoverflow.com/q/1"):
    return Snippet.create(
        id=sid, content=f"<p>snippet {sid}</p>", source_url=url,
        collected_at=T0, rating=rating)


def make_table(options, criteria, cells, created=T0, updated=None):
    return KnowledgeTable(
        id="t1", title="fixture",
        options=tuple(Option(f"o{i}", f"option {i}") for i in range(options)),
        criteria=tuple(Criterion(f"c{j}", f"criterion {j}") for j in range(criteria)),
        cells=cells, created_at=created, updated_at=updated or created)


class TestValidateTable:
    def test_empty_table_ok(self):
        table = make_table(0, 0, {})
        assert validate_table(table, SnippetStore()).ok

    def test_dangling_ref(self):
        table = make_table(1, 1, {("o0", "c0"): ("s9",)})
        result = validate_table(table, SnippetStore())
        assert not result.ok
        assert any(v.kind == "dangling_ref" and v.detail == "s9"
                   for v in result.violations)

    def test_three_by_four_fixture_resolves(self):
        # oracle: walk every cell ref by hand and check it is in the store
        cells = {}
        store = SnippetStore()
        counter = 0
        for i in range(3):
            for j in range(4):
                sid = f"s{counter}"
                counter += 1
                store.add(make_snippet(sid))
                cells[(f"o{i}", f"c{j}")] = (sid,)
        table = make_table(3, 4, cells)
        refs = [sid for sids in cells.values() for sid in sids]
        assert len(refs) == 12 and all(sid in store for sid in refs)
        assert validate_table(table, store).ok

    def test_duplicate_option_ids(self):
        table = KnowledgeTable(
            id="t", title="dup",
            options=(Option("o1", "a"), Option("o1", "b")),
            criteria=(), cells={}, created_at=T0, updated_at=T0)
        result = validate_table(table, SnippetStore())
        assert any(v.kind == "duplicate_option_id" for v in result.violations)

    def test_timestamp_inversion(self):
        table = make_table(0, 0, {}, created=T0, updated=T0 - timedelta(days=1))
        result = validate_table(table, SnippetStore())
        assert any(v.kind == "timestamp_inversion" for v in result.violations)

    def test_placed_snippet_without_rating(self):
        store = SnippetStore.of(make_snippet("s1", rating=None))
        table = make_table(1, 1, {("o0", "c0"): ("s1",)})
        result = validate_table(table, store)
        assert any(v.kind == "unrated_placement" for v in result.violations)

    def test_idempotent_and_pure(self):
        table = make_table(1, 1, {("o0", "c0"): ("s9",)})
        store = SnippetStore()
        first = validate_table(table, store)
        second = validate_table(table, store)
        assert first == second
        assert table.cells == {("o0", "c0"): ("s9",)}


class TestRoundTrip:
    def test_table(self):
        table = make_table(2, 2, {("o0", "c1"): ("s1", "s2")},
                           updated=T0 + timedelta(hours=1))
        assert decode_table(encode_table(table)) == table

    def test_snippet_plain(self):
        snippet = make_snippet("s1")
        assert decode_snippet(encode_snippet(snippet)) == snippet

    def test_snippet_full(self):
        snapshot = ContextSnapshot(
            surroundings="<div><p>around</p></div>",
            highlight_start=0, highlight_end=6,
            includes_question_block=True)
        enrichment = EnrichmentSignals(
            domain="stackoverflow.com",
            detections=(DetectionResult("Python", "language", "numpy",
                                        "snippet", "3.5"),),
            last_updated=T0,
            popularity=PopularitySignal("upvotes", 42, True, "stackoverflow.com"),
        )
        snippet = Snippet.create(
            id="s1", content="<p>around</p>",
            source_url="https://stackoverflow.com/q/1", collected_at=T0,
            rating=Rating.NEGATIVE, context_snapshot=snapshot,
            enrichment=enrichment)
        assert decode_snippet(encode_snippet(snippet)) == snippet

    def test_plain_text_derived_when_absent(self):
        doc = {"id": "s1", "content": "<p>Hello   <b>world</b></p>",
               "source_url": "https://a.com/x",
               "collected_at": "2021-01-15T10:00:00Z", "rating": "positive"}
        assert decode_snippet(doc).plain_text == "Hello world"

    def test_timestamps(self):
        assert format_ts(parse_ts("2021-01-15T10:00:00Z")) == "2021-01-15T10:00:00Z"
        assert parse_ts("2021-01-15T11:00:00+01:00") == parse_ts("2021-01-15T10:00:00Z")


class TestSchemaGoldens:
    """The persisted document shapes are pinned by golden files."""

    def _fixture_table(self):
        return KnowledgeTable(
            id="demo-table", title="demo",
            options=(Option("o1", "first option"), Option("o2", "second option")),
            criteria=(Criterion("c1", "only criterion"),),
            cells={("o1", "c1"): ("s1",), ("o2", "c1"): ("s2",)},
            author_profile_url="https://github.com/acmedev",
            created_at=T0, updated_at=T0)

    def _fixture_snippet(self):
        return Snippet.create(
            id="s1", content="<p>Evidence <b>text</b></p>",
            source_url="https://stackoverflow.com/q/1",
            collected_at=T0, rating=Rating.POSITIVE,
            context_snapshot=ContextSnapshot(
                "<div><p>Evidence text nearby</p></div>", 0, 13, True),
            enrichment=EnrichmentSignals(
                domain="stackoverflow.com",
                detections=(DetectionResult("Python", "language", "numpy",
                                            "snippet", "3.5"),),
                last_updated=datetime(2019, 6, 4, tzinfo=timezone.utc),
                popularity=PopularitySignal("upvotes", 42, True,
                                            "stackoverflow.com"),
                code_examples=()))

    def test_table_document(self):
        import json
        from conftest import GOLDEN_DIR
        golden = json.loads((GOLDEN_DIR / "table_doc.json").read_text())
        assert encode_table(self._fixture_table()) == golden

    def test_snippet_document(self):
        import json
        from conftest import GOLDEN_DIR
        golden = json.loads((GOLDEN_DIR / "snippet_doc.json").read_text())
        assert encode_snippet(self._fixture_snippet()) == golden


class TestThresholdConfig:
    def test_defaults(self):
        cfg = ThresholdConfig()
        assert cfg.idle_threshold == timedelta(seconds=8)
        assert cfg.staleness_threshold == timedelta(days=3 * 365)
        assert cfg.diversity_min_domains == 2
        assert (cfg.badge_yellow_at, cfg.badge_red_at) == (1, 2)
        assert cfg.suggestion_top_n == 10
        assert cfg.version_vicinity == 30

    def test_red_must_exceed_yellow(self):
        with pytest.raises(ValueError):
            ThresholdConfig(badge_yellow_at=2, badge_red_at=2)

    def test_durations_positive(self):
        with pytest.raises(ValueError):
            ThresholdConfig(idle_threshold=timedelta(0))

    def test_overrides(self):
        cfg = ThresholdConfig().with_overrides(
            {"idle_threshold": 4, "diversity_min_domains": 3})
        assert cfg.idle_threshold == timedelta(seconds=4)
        assert cfg.diversity_min_domains == 3
        with pytest.raises(KeyError):
            ThresholdConfig().with_overrides({"bogus": 1})
