"""Clients for the two external services the report consumes.

Both clients run in one of two modes: "live" issues HTTP requests with
timeouts and retries; "fixture" reads canned payloads from a directory and
performs zero network operations, which is what tests and the CLI's
--offline flag use. Failures degrade the report group, never the request.
"""

from __future__ import annotations

import json
import re
import threading
import time
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from urllib.parse import urlsplit

import httpx

DEFAULT_SUGGEST_ENDPOINT = "https://suggestqueries.google.com/complete/search"
DEFAULT_PROFILE_API = "https://api.github.com"
SUPPORTED_PROFILE_HOSTS = ("github.com", "www.github.com")

TOP_REPOS = 5
TOP_LANGUAGES = 3

_MAX_SUGGESTION_LEN = 200
_PER_HOST_CONCURRENCY = 4

_host_gates: dict[str, threading.Semaphore] = {}
_host_gates_lock = threading.Lock()


def _gate(host: str) -> threading.Semaphore:
    with _host_gates_lock:
        if host not in _host_gates:
            _host_gates[host] = threading.Semaphore(_PER_HOST_CONCURRENCY)
        return _host_gates[host]


class ServiceUnavailable(Exception):
    """The external service kept failing after retries."""


class ProfileNotFound(Exception):
    """The code-hosting profile does not exist (deleted or mistyped)."""


@dataclass(frozen=True)
class SuggestionResponse:
    query: str
    suggestions: tuple[str, ...]


@dataclass(frozen=True)
class AuthorCredibility:
    display_name: str
    top_repo_stars: tuple[tuple[str, int], ...]
    top_languages: tuple[str, ...]
    affiliation: str | None
    profile_url: str


def sanitize_text(value: str) -> str:
    cleaned = "".join(
        ch for ch in value if unicodedata.category(ch) != "Cc").strip()
    return cleaned[:_MAX_SUGGESTION_LEN]


def query_slug(query: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", query.strip().lower()).strip("-")
    return slug or "empty"


class SuggestionClient:
    """Autocomplete suggestions for "<option> vs" / "<option> versus"."""

    def __init__(self, mode: str = "fixture",
                 fixtures_dir: str | Path | None = None,
                 endpoint: str = DEFAULT_SUGGEST_ENDPOINT,
                 timeout: float = 5.0, retries: int = 2,
                 top_n: int = 10):
        if mode not in ("fixture", "live"):
            raise ValueError(f"unknown client mode: {mode}")
        self.mode = mode
        self.fixtures_dir = Path(fixtures_dir) if fixtures_dir else None
        self.endpoint = endpoint
        self.timeout = timeout
        self.retries = retries
        self.top_n = top_n

    def fetch(self, option_name: str) -> tuple[SuggestionResponse, SuggestionResponse]:
        """Both query forms for one option name."""
        if not option_name or not option_name.strip():
            raise ValueError("option name must be non-empty")
        name = option_name.strip()
        return (self._one(f"{name} vs"), self._one(f"{name} versus"))

    def _one(self, query: str) -> SuggestionResponse:
        if self.mode == "fixture":
            suggestions = self._from_fixture(query)
        else:
            suggestions = self._from_live(query)
        cleaned = [sanitize_text(s) for s in suggestions]
        cleaned = [s for s in cleaned if s][: self.top_n]
        return SuggestionResponse(query=query, suggestions=tuple(cleaned))

    def _from_fixture(self, query: str) -> list[str]:
        if self.fixtures_dir is None:
            raise ServiceUnavailable("no fixtures directory configured")
        path = self.fixtures_dir / "suggest" / f"{query_slug(query)}.json"
        if not path.exists():
            return []  # no canned suggestions for this query
        doc = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(doc, dict):
            return list(doc.get("suggestions", []))
        return list(doc)

    def _from_live(self, query: str) -> list[str]:
        host = urlsplit(self.endpoint).hostname or "suggest"
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                with _gate(host):
                    response = httpx.get(
                        self.endpoint,
                        params={"client": "firefox", "q": query},
                        timeout=self.timeout)
                response.raise_for_status()
                payload = response.json()
                if isinstance(payload, list) and len(payload) >= 2:
                    return [str(s) for s in payload[1]]
                if isinstance(payload, dict):
                    return [str(s) for s in payload.get("suggestions", [])]
                return []
            except (httpx.HTTPError, ValueError) as exc:
                last_error = exc
                if attempt < self.retries:
                    time.sleep(0.5 * (2 ** attempt))
        raise ServiceUnavailable(f"suggestion service failed: {last_error}")


class ProfileClient:
    """Author-credibility profile from a code-hosting service."""

    def __init__(self, mode: str = "fixture",
                 fixtures_dir: str | Path | None = None,
                 api_base: str = DEFAULT_PROFILE_API,
                 timeout: float = 5.0, retries: int = 2,
                 token: str | None = None):
        if mode not in ("fixture", "live"):
            raise ValueError(f"unknown client mode: {mode}")
        self.mode = mode
        self.fixtures_dir = Path(fixtures_dir) if fixtures_dir else None
        self.api_base = api_base.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.token = token

    @staticmethod
    def username_from(profile_url: str) -> str:
        parts = urlsplit(profile_url)
        if (parts.hostname or "").lower() not in SUPPORTED_PROFILE_HOSTS:
            raise ValueError(
                f"unsupported code-hosting profile host: {parts.hostname}")
        segments = [s for s in parts.path.split("/") if s]
        if not segments:
            raise ValueError(f"no username in profile URL: {profile_url}")
        return segments[0]

    def fetch(self, profile_url: str) -> AuthorCredibility:
        username = self.username_from(profile_url)
        if self.mode == "fixture":
            payload = self._fixture_payload(username)
        else:
            payload = self._live_payload(username)
        return self._aggregate(payload, profile_url)

    def _fixture_payload(self, username: str) -> dict:
        if self.fixtures_dir is None:
            raise ServiceUnavailable("no fixtures directory configured")
        path = self.fixtures_dir / "profile" / f"github-{username}.json"
        if not path.exists():
            raise ProfileNotFound(username)
        return json.loads(path.read_text(encoding="utf-8"))

    def _live_payload(self, username: str) -> dict:
        headers = {"Accept": "application/vnd.github+json"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        host = urlsplit(self.api_base).hostname or "profile"
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                with _gate(host):
                    user = httpx.get(f"{self.api_base}/users/{username}",
                                     headers=headers, timeout=self.timeout)
                if user.status_code == 404:
                    raise ProfileNotFound(username)
                user.raise_for_status()
                with _gate(host):
                    repos = httpx.get(
                        f"{self.api_base}/users/{username}/repos",
                        params={"per_page": 100}, headers=headers,
                        timeout=self.timeout)
                repos.raise_for_status()
                return {"user": user.json(), "repos": repos.json()}
            except ProfileNotFound:
                raise
            except (httpx.HTTPError, ValueError) as exc:
                last_error = exc
                if attempt < self.retries:
                    time.sleep(0.5 * (2 ** attempt))
        raise ServiceUnavailable(f"profile service failed: {last_error}")

    @staticmethod
    def _aggregate(payload: dict, profile_url: str) -> AuthorCredibility:
        user = payload.get("user") or {}
        repos = [r for r in payload.get("repos") or [] if not r.get("fork")]
        by_stars = sorted(
            repos, key=lambda r: (-int(r.get("stargazers_count") or 0),
                                  str(r.get("name") or "")))
        top_repos = tuple(
            (str(r.get("name") or ""), int(r.get("stargazers_count") or 0))
            for r in by_stars[:TOP_REPOS])
        languages = Counter(
            str(r["language"]) for r in repos if r.get("language"))
        top_languages = tuple(
            name for name, _count in sorted(
                languages.items(), key=lambda kv: (-kv[1], kv[0]))[:TOP_LANGUAGES])
        display = sanitize_text(str(user.get("name") or user.get("login") or ""))
        affiliation = user.get("company")
        return AuthorCredibility(
            display_name=display,
            top_repo_stars=top_repos,
            top_languages=top_languages,
            affiliation=sanitize_text(str(affiliation)) if affiliation else None,
            profile_url=profile_url,
        )
