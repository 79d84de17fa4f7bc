"""CLI surface: subcommands, exit codes, golden JSON output."""

import json

import pytest
from click.testing import CliRunner

from tablevet.cli import main

from conftest import BUNDLE_DIR, FIXTURES_DIR, GOLDEN_DIR, REPORT_NOW_RAW


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def cli_store(tmp_path, runner):
    store = tmp_path / "store"
    result = runner.invoke(main, ["import", str(BUNDLE_DIR),
                                  "--store", str(store)])
    assert result.exit_code == 0, result.output
    table_id = result.output.strip()
    return store, table_id


def appraise_args(store, table_id, *extra):
    return ["appraise", table_id, "--store", str(store),
            "--offline", "--fixtures", str(FIXTURES_DIR),
            "--now", REPORT_NOW_RAW, *extra]


class TestImport:
    def test_import_prints_stable_id(self, runner, tmp_path):
        store = tmp_path / "store"
        first = runner.invoke(main, ["import", str(BUNDLE_DIR), "--store", str(store)])
        second = runner.invoke(main, ["import", str(BUNDLE_DIR), "--store", str(store)])
        assert first.exit_code == second.exit_code == 0
        assert first.output == second.output

    def test_malformed_bundle_exit_1(self, runner, tmp_path):
        bundle = tmp_path / "bundle"
        bundle.mkdir()
        (bundle / "table.json").write_text("{oops")
        result = runner.invoke(main, ["import", str(bundle),
                                      "--store", str(tmp_path / "store")])
        assert result.exit_code == 1
        assert "table.json" in result.output


class TestAppraise:
    def test_json_output_matches_golden(self, runner, cli_store):
        store, table_id = cli_store
        result = runner.invoke(main, appraise_args(store, table_id,
                                                   "--format", "json"))
        assert result.exit_code == 0, result.output
        golden = (GOLDEN_DIR / "report.json").read_text()
        assert result.output == golden

    def test_text_output_badges(self, runner, cli_store):
        store, table_id = cli_store
        result = runner.invoke(main, appraise_args(store, table_id,
                                                   "--format", "text"))
        assert result.exit_code == 0
        assert "TRUSTWORTHINESS" in result.output
        assert "[RED 2]" in result.output
        assert "techgeekbuzz.com" in result.output
        assert "▼" in result.output  # issue marker

    def test_unknown_table_exit_1(self, runner, cli_store):
        store, _ = cli_store
        result = runner.invoke(main, appraise_args(store, "missing-id"))
        assert result.exit_code == 1

    def test_whitelist_file_override(self, runner, cli_store, tmp_path):
        store, table_id = cli_store
        wl = tmp_path / "wl.json"
        wl.write_text(json.dumps({"domains": ["techgeekbuzz.com",
                                              "stackoverflow.com",
                                              "medium.com", "python.org"]}))
        result = runner.invoke(main, appraise_args(
            store, table_id, "--format", "json", "--whitelist", str(wl)))
        report = json.loads(result.output)
        trust = report["facets"]["trustworthiness"]
        assert trust["badge"] == {"level": "yellow", "open_issues": 1}

    def test_render_writes_figures_and_csvs(self, runner, cli_store, tmp_path):
        store, table_id = cli_store
        out = tmp_path / "rendered"
        result = runner.invoke(main, appraise_args(
            store, table_id, "--format", "json", "--render", str(out)))
        assert result.exit_code == 0, result.output
        names = sorted(p.name for p in out.iterdir())
        assert names == ["domains.png", "page_stats.csv",
                         "query_stats.csv", "timeline.png"]
        assert (out / "domains.png").stat().st_size > 1000
        header = (out / "query_stats.csv").read_text().splitlines()[0]
        assert header == "query,ordinal,effective_seconds,snippet_count"


class TestDetectorsCommand:
    def test_validate_ok(self, runner, tmp_path):
        registry = tmp_path / "registry.json"
        registry.write_text(json.dumps([
            {"name": "A", "category": "language", "keywords": ["alpha"]}]))
        result = runner.invoke(main, ["detectors", "validate", str(registry)])
        assert result.exit_code == 0
        assert "ok: 1 detectors" in result.output

    def test_duplicate_keyword_exit_1_names_keyword(self, runner, tmp_path):
        registry = tmp_path / "registry.json"
        registry.write_text(json.dumps([
            {"name": "A", "category": "language", "keywords": ["shared"]},
            {"name": "B", "category": "framework", "keywords": ["shared"]}]))
        result = runner.invoke(main, ["detectors", "validate", str(registry)])
        assert result.exit_code == 1
        assert "shared" in result.output


class TestUsage:
    def test_unknown_subcommand_exit_2(self, runner):
        result = runner.invoke(main, ["frobnicate"])
        assert result.exit_code == 2

    def test_bad_now_exit_2(self, runner, cli_store):
        store, table_id = cli_store
        result = runner.invoke(main, ["appraise", table_id,
                                      "--store", str(store),
                                      "--now", "not-a-time"])
        assert result.exit_code == 2
