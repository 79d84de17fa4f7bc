"""Document store and bundle import."""

import json
import shutil
from datetime import datetime, timezone

import pytest

from tablevet.appraisal import ConsumerState, Whitelist
from tablevet.bundle import BundleError, import_bundle
from tablevet.service import ServiceConfig, build_report
from tablevet.store import DocumentStore, TableNotFound

from conftest import BUNDLE_DIR, FIXTURES_DIR, REPORT_NOW

import dataclasses


class TestImport:
    def test_idempotent_content_hash_id(self, tmp_path, registry):
        store = DocumentStore(tmp_path / "store")
        first = import_bundle(store, BUNDLE_DIR, registry)
        second = import_bundle(store, BUNDLE_DIR, registry)
        assert first == second
        assert store.list_table_ids() == [first]

    def test_missing_session_log_degrades_cleanly(self, tmp_path, registry):
        bundle = tmp_path / "bundle"
        shutil.copytree(BUNDLE_DIR, bundle)
        (bundle / "session.log").unlink()
        store = DocumentStore(tmp_path / "store")
        table_id = import_bundle(store, bundle, registry)
        config = ServiceConfig(store_path=str(store.root), offline=True,
                               fixtures_dir=str(FIXTURES_DIR))
        report = build_report(store, table_id, ConsumerState.initial(),
                              REPORT_NOW, config)
        process = report.thoroughness.groups[0]
        assert process.name == "Research Process"
        assert process.state == "no_data"
        queries = report.context.groups[0]
        assert queries.state == "no_data"

    def test_malformed_table_names_the_file(self, tmp_path, registry):
        bundle = tmp_path / "bundle"
        bundle.mkdir()
        (bundle / "table.json").write_text("{not json")
        store = DocumentStore(tmp_path / "store")
        with pytest.raises(BundleError, match="table.json"):
            import_bundle(store, bundle, registry)

    def test_dangling_ref_fails_validation(self, tmp_path, registry):
        bundle = tmp_path / "bundle"
        shutil.copytree(BUNDLE_DIR, bundle)
        doc = json.loads((bundle / "table.json").read_text())
        doc["cells"][0]["snippet_ids"].append("missing-snippet")
        (bundle / "table.json").write_text(json.dumps(doc))
        store = DocumentStore(tmp_path / "store")
        with pytest.raises(BundleError, match="dangling_ref"):
            import_bundle(store, bundle, registry)

    def test_snippets_enriched_at_import(self, imported_store):
        store, table_id = imported_store
        snippets = store.load_snippets(table_id)
        s1 = snippets.get("s1")
        assert s1.enrichment is not None
        assert s1.enrichment.domain == "stackoverflow.com"
        assert s1.enrichment.popularity.count == 42
        assert s1.context_snapshot is not None
        assert s1.context_snapshot.includes_question_block is True


class TestStore:
    def test_unknown_table(self, tmp_path):
        store = DocumentStore(tmp_path)
        with pytest.raises(TableNotFound):
            store.load_table("nope")

    def test_consumer_state_roundtrip(self, tmp_path):
        store = DocumentStore(tmp_path)
        state = ConsumerState.initial()
        state = dataclasses.replace(
            state,
            whitelist=state.whitelist.with_added("techgeekbuzz.com"),
            trusted_added=frozenset({"techgeekbuzz.com"}),
            dismissed=frozenset({"low_diversity"}),
            threshold_overrides=(("diversity_min_domains", 3),),
        )
        store.save_consumer("consumer-1", state)
        loaded = store.load_consumer("consumer-1")
        assert loaded == state

    def test_fresh_consumer_gets_default_whitelist(self, tmp_path):
        store = DocumentStore(tmp_path)
        state = store.load_consumer("new-consumer")
        assert len(state.whitelist.domains) == 25
        assert state.whitelist.source == "default"

    def test_cache_ttl(self, tmp_path, monkeypatch):
        store = DocumentStore(tmp_path)
        store.cache_put("k", [1, 2, 3])
        assert store.cache_get("k") == [1, 2, 3]
        assert store.cache_get("k", ttl=-1) is None

    def test_pages_roundtrip(self, tmp_path):
        store = DocumentStore(tmp_path)
        pages = {"https://a.com/x": "<html>a</html>",
                 "https://b.com/y": "<html>b</html>"}
        store.save_pages("t1", pages)
        assert store.load_pages("t1") == pages
