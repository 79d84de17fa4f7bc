"""Command-line entry points.

Exit status: 0 success, 1 validation/data failure, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from .appraisal import Whitelist, report_json
from .bundle import BundleError, import_bundle
from .codec import DecodeError, parse_ts
from .enrichment import DetectorRegistry, RegistryError, default_registry
from .model import ThresholdConfig
from .service import ServiceConfig, build_report
from .session import NowBeforeData
from .store import DocumentStore, TableNotFound
from .textview import render_text
from .domains import normalize_whitelist_entry

import dataclasses


@click.group()
def main():
    """Appraise the reuse-worthiness of captured decision tables."""


def _store(store_path: str | None) -> DocumentStore:
    config = ServiceConfig.from_env(store_path=store_path)
    return DocumentStore(config.store_path)


@main.command("import")
@click.argument("bundle", type=click.Path(exists=True, file_okay=False))
@click.option("--store", "store_path", default=None,
              help="Store directory (default $TABLEVET_STORE or ./store).")
@click.option("--registry", "registry_path", type=click.Path(exists=True),
              default=None, help="Detector registry file (default: bundled).")
def import_cmd(bundle: str, store_path: str | None, registry_path: str | None):
    """Validate, enrich, and persist a bundle directory."""
    try:
        registry = (DetectorRegistry.load(registry_path)
                    if registry_path else default_registry())
        table_id = import_bundle(_store(store_path), bundle, registry)
    except (BundleError, RegistryError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(table_id)


@main.command()
@click.argument("table_id")
@click.option("--now", "now_raw", default=None,
              help="Appraise as of this UTC timestamp (default: wall clock).")
@click.option("--offline", is_flag=True,
              help="Serve external material from fixtures; no network.")
@click.option("--whitelist", "whitelist_file", type=click.Path(exists=True),
              default=None,
              help="JSON file with a 'domains' list replacing the whitelist.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]),
              default="text", show_default=True)
@click.option("--consumer", default="anonymous", show_default=True,
              help="Consumer identity whose saved adjustments apply.")
@click.option("--store", "store_path", default=None)
@click.option("--fixtures", "fixtures_dir", default=None,
              help="Fixture directory for --offline (default <store>/fixtures).")
@click.option("--render", "render_dir", type=click.Path(file_okay=False),
              default=None,
              help="Also write figures and stats CSVs into this directory.")
def appraise(table_id: str, now_raw: str | None, offline: bool,
             whitelist_file: str | None, fmt: str, consumer: str,
             store_path: str | None, fixtures_dir: str | None,
             render_dir: str | None):
    """Compute and print the appraisal report for an imported table."""
    config = ServiceConfig.from_env(
        store_path=store_path, fixtures_dir=fixtures_dir,
        offline=True if offline else None)
    store = DocumentStore(config.store_path)
    try:
        now = parse_ts(now_raw) if now_raw else datetime.now(timezone.utc)
    except DecodeError as exc:
        raise click.UsageError(str(exc))

    state = store.load_consumer(consumer)
    if whitelist_file:
        try:
            doc = json.loads(Path(whitelist_file).read_text(encoding="utf-8"))
            domains = frozenset(
                normalize_whitelist_entry(d) for d in doc["domains"])
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            click.echo(f"error: bad whitelist file: {exc}", err=True)
            sys.exit(1)
        state = dataclasses.replace(
            state, whitelist=Whitelist(domains, "user-edited"))

    try:
        report = build_report(store, table_id, state, now, config)
    except TableNotFound:
        click.echo(f"error: unknown table {table_id}", err=True)
        sys.exit(1)
    except NowBeforeData as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    if render_dir:
        from .report_render import render_report_files
        for path in render_report_files(report.to_dict(), render_dir):
            click.echo(f"wrote {path}", err=True)

    if fmt == "json":
        click.echo(report_json(report))
    else:
        click.echo(render_text(report.to_dict()), nl=False)


@main.group()
def detectors():
    """Detector registry utilities."""


@detectors.command("validate")
@click.argument("registry", type=click.Path(exists=True, dir_okay=False))
def detectors_validate(registry: str):
    """Check a registry file: categories, keyword uniqueness, URL patterns."""
    try:
        loaded = DetectorRegistry.load(registry)
    except RegistryError as exc:
        click.echo(f"invalid registry: {exc}", err=True)
        sys.exit(1)
    keywords = sum(len(d.keywords) for d in loaded)
    click.echo(f"ok: {len(loaded)} detectors, {keywords} keywords")


@main.command()
@click.option("--port", default=8400, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--store", "store_path", default=None)
@click.option("--offline", is_flag=True)
@click.option("--fixtures", "fixtures_dir", default=None)
@click.option("--ui-origin", default=None,
              help="CORS origin for the viewer UI (default $TABLEVET_UI_ORIGIN or *).")
def serve(port: int, host: str, store_path: str | None, offline: bool,
          fixtures_dir: str | None, ui_origin: str | None):
    """Run the HTTP API the viewer UI consumes."""
    import os

    import uvicorn

    from .api import create_app

    config = ServiceConfig.from_env(
        store_path=store_path, fixtures_dir=fixtures_dir,
        offline=True if offline else None)
    origin = ui_origin or os.environ.get("TABLEVET_UI_ORIGIN", "*")
    app = create_app(config, ui_origin=origin)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
