"""Report orchestration: load store documents, fetch external material,
assemble. Shared by the CLI and the HTTP API so both produce identical
reports for identical inputs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .appraisal import (
    AppraisalReport,
    AuthorInput,
    ConsumerState,
    ReportInputs,
    SuggestionsInput,
    report_for_state,
)
from .clients import (
    ProfileClient,
    ProfileNotFound,
    ServiceUnavailable,
    SuggestionClient,
    query_slug,
)
from .model import ThresholdConfig
from .store import DocumentStore


@dataclass
class ServiceConfig:
    store_path: str
    offline: bool = False
    fixtures_dir: str | None = None
    suggest_endpoint: str | None = None
    profile_api: str | None = None
    profile_token: str | None = None

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        values = {
            "store_path": os.environ.get("TABLEVET_STORE", "./store"),
            "offline": os.environ.get("TABLEVET_OFFLINE", "") == "1",
            "fixtures_dir": os.environ.get("TABLEVET_FIXTURES"),
            "suggest_endpoint": os.environ.get("TABLEVET_SUGGEST_ENDPOINT"),
            "profile_api": os.environ.get("TABLEVET_PROFILE_API"),
            "profile_token": os.environ.get("TABLEVET_PROFILE_TOKEN"),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def suggestion_client(self) -> SuggestionClient:
        mode = "fixture" if self.offline else "live"
        kwargs = {}
        if self.suggest_endpoint:
            kwargs["endpoint"] = self.suggest_endpoint
        return SuggestionClient(mode=mode, fixtures_dir=self._fixtures(), **kwargs)

    def profile_client(self) -> ProfileClient:
        mode = "fixture" if self.offline else "live"
        kwargs = {}
        if self.profile_api:
            kwargs["api_base"] = self.profile_api
        return ProfileClient(mode=mode, fixtures_dir=self._fixtures(),
                             token=self.profile_token, **kwargs)

    def _fixtures(self) -> Path | None:
        if self.fixtures_dir:
            return Path(self.fixtures_dir)
        candidate = Path(self.store_path) / "fixtures"
        return candidate if candidate.exists() else None


def fetch_alternatives(option_names: list[str], client: SuggestionClient,
                       store: DocumentStore | None = None) -> SuggestionsInput:
    """Suggestion lists per option; degrades to "unavailable", never raises.

    Live responses go through a short-lived store cache to stay fresh
    without hammering the endpoint on every review.
    """
    if not option_names:
        return SuggestionsInput(state="no_data")
    per_option: dict[str, tuple[str, ...]] = {}
    try:
        for name in option_names:
            cache_key = f"suggest:{query_slug(name)}"
            cached = store.cache_get(cache_key) if store and client.mode == "live" else None
            if cached is not None:
                per_option[name] = tuple(cached)
                continue
            vs_response, versus_response = client.fetch(name)
            merged = list(vs_response.suggestions)
            for suggestion in versus_response.suggestions:
                if suggestion not in merged:
                    merged.append(suggestion)
            per_option[name] = tuple(merged)
            if store and client.mode == "live":
                store.cache_put(cache_key, merged)
    except ServiceUnavailable:
        return SuggestionsInput.unavailable()
    return SuggestionsInput(state="ok", per_option=per_option)


def fetch_author(profile_url: str | None,
                 client: ProfileClient) -> AuthorInput:
    if not profile_url:
        return AuthorInput.not_provided()
    try:
        return AuthorInput(state="ok", profile=client.fetch(profile_url))
    except (ProfileNotFound, ServiceUnavailable, ValueError):
        return AuthorInput(state="unverified")


def gather_inputs(store: DocumentStore, table_id: str, now: datetime,
                  config: ServiceConfig,
                  base_cfg: ThresholdConfig | None = None) -> ReportInputs:
    table = store.load_table(table_id)
    snippets = store.load_snippets(table_id)
    log = store.load_session(table_id)
    alternatives = fetch_alternatives(
        [o.name for o in table.options], config.suggestion_client(), store)
    author = fetch_author(table.author_profile_url, config.profile_client())
    return ReportInputs(
        table=table, snippets=snippets, log=log,
        alternatives=alternatives, author=author, now=now,
        base_cfg=base_cfg or ThresholdConfig(),
    )


def build_report(store: DocumentStore, table_id: str,
                 consumer_state: ConsumerState, now: datetime,
                 config: ServiceConfig,
                 base_cfg: ThresholdConfig | None = None) -> AppraisalReport:
    inputs = gather_inputs(store, table_id, now, config, base_cfg)
    return report_for_state(inputs, consumer_state)
