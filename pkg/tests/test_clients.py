"""External clients: fixture mode, sanitization, aggregation, degradation."""

import socket

import pytest

from tablevet.clients import (
    ProfileClient,
    ProfileNotFound,
    SuggestionClient,
    sanitize_text,
)

from conftest import FIXTURES_DIR


@pytest.fixture()
def no_network(monkeypatch):
    def blow_up(*args, **kwargs):
        raise AssertionError("network operation attempted in fixture mode")
    monkeypatch.setattr(socket.socket, "connect", blow_up)
    monkeypatch.setattr(socket, "create_connection", blow_up)
    monkeypatch.setattr(socket, "getaddrinfo", blow_up)


class TestSuggestionClient:
    def test_fixture_reads_canned_lists(self, no_network):
        client = SuggestionClient(mode="fixture", fixtures_dir=FIXTURES_DIR)
        vs, versus = client.fetch("numpy ndarray")
        assert vs.query == "numpy ndarray vs"
        assert len(vs.suggestions) == 10
        assert vs.suggestions[0] == "numpy ndarray vs pandas dataframe"
        assert versus.suggestions == ("numpy ndarray versus pandas dataframe",
                                      "numpy ndarray versus xarray")

    def test_missing_fixture_means_no_suggestions(self, no_network):
        client = SuggestionClient(mode="fixture", fixtures_dir=FIXTURES_DIR)
        vs, versus = client.fetch("obscure option nobody compares")
        assert vs.suggestions == () and versus.suggestions == ()

    def test_empty_option_name_rejected(self):
        client = SuggestionClient(mode="fixture", fixtures_dir=FIXTURES_DIR)
        with pytest.raises(ValueError):
            client.fetch("   ")

    def test_truncates_to_top_n(self, tmp_path, no_network):
        suggest = tmp_path / "suggest"
        suggest.mkdir()
        (suggest / "big-vs.json").write_text(
            "[" + ",".join(f'"big vs alt{i}"' for i in range(25)) + "]")
        client = SuggestionClient(mode="fixture", fixtures_dir=tmp_path)
        vs, _ = client.fetch("big")
        assert len(vs.suggestions) == 10

    def test_sanitization(self):
        assert sanitize_text("  ok\x00\x07 value  ") == "ok value"
        assert len(sanitize_text("x" * 500)) == 200


class TestProfileClient:
    def test_fixture_profile_aggregation(self, no_network):
        client = ProfileClient(mode="fixture", fixtures_dir=FIXTURES_DIR)
        profile = client.fetch("https://github.com/acmedev")
        # oracle: sorting the fixture payload by stars, forks excluded
        assert profile.top_repo_stars == (("matrix-utils", 1200),
                                          ("numpy-recipes", 40),
                                          ("dotfiles", 3))
        assert profile.top_languages == ("Python", "Shell")
        assert profile.display_name == "Avery Doe"
        assert profile.affiliation == "Initech"

    def test_unsupported_host_rejected(self):
        client = ProfileClient(mode="fixture", fixtures_dir=FIXTURES_DIR)
        with pytest.raises(ValueError, match="unsupported"):
            client.fetch("https://dev.example.com/acmedev")

    def test_deleted_profile(self, no_network):
        client = ProfileClient(mode="fixture", fixtures_dir=FIXTURES_DIR)
        with pytest.raises(ProfileNotFound):
            client.fetch("https://github.com/ghost-user-gone")
