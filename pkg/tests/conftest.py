"""Shared fixtures: the imported demo bundle and client fixtures."""

from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path

import pytest

from tablevet.bundle import import_bundle
from tablevet.enrichment import default_registry
from tablevet.service import ServiceConfig
from tablevet.store import DocumentStore

DATA_DIR = Path(__file__).parent / "data"
BUNDLE_DIR = DATA_DIR / "bundle_python_matrices"
FIXTURES_DIR = DATA_DIR / "fixtures"
GOLDEN_DIR = DATA_DIR / "golden"

REPORT_NOW = datetime(2021, 2, 1, tzinfo=timezone.utc)
REPORT_NOW_RAW = "2021-02-01T00:00:00Z"


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def imported_store(tmp_path_factory, registry):
    """The demo bundle imported once; tests must not mutate table docs."""
    root = tmp_path_factory.mktemp("store")
    store = DocumentStore(root)
    table_id = import_bundle(store, BUNDLE_DIR, registry)
    return store, table_id


@pytest.fixture()
def service_config(imported_store):
    store, _ = imported_store
    return ServiceConfig(store_path=str(store.root), offline=True,
                         fixtures_dir=str(FIXTURES_DIR))
