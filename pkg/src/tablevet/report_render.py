"""File renderings of a report: figures plus delimited stats.

`render_report_files` drops four artifacts next to the CLI's JSON/text
output: a domain-distribution chart, the two-level research timeline
(violet ramp, lighter = older), and CSVs of the query and page statistics.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

UNTRUSTED_COLOR = "#c0392b"
TRUSTED_COLOR = "#6a51a3"


def render_report_files(report_dict: dict, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    written.append(_domain_figure(report_dict, out / "domains.png"))
    timeline_path = _timeline_figure(report_dict, out / "timeline.png")
    if timeline_path:
        written.append(timeline_path)
    written.extend(_stats_csvs(report_dict, out))
    return written


def _group(report: dict, facet: str, name: str) -> dict | None:
    for group in report["facets"][facet]["groups"]:
        if group["name"] == name:
            return group
    return None


def _domain_figure(report: dict, path: Path) -> Path:
    group = _group(report, "trustworthiness", "Domains") or {"data": {}}
    rows = group.get("data", {}).get("distribution", [])
    fig, ax = plt.subplots(figsize=(7, max(1.8, 0.5 * len(rows) + 1)))
    if rows:
        labels = [r["domain"] for r in rows][::-1]
        counts = [r["count"] for r in rows][::-1]
        colors = [TRUSTED_COLOR if r["trusted"] else UNTRUSTED_COLOR
                  for r in rows][::-1]
        ax.barh(labels, counts, color=colors)
        ax.set_xlabel("snippets")
        untrusted = [r["domain"] for r in rows if not r["trusted"]]
        subtitle = f" ({len(untrusted)} untrusted)" if untrusted else ""
        ax.set_title(f"Snippet distribution across domains{subtitle}")
        ax.xaxis.get_major_locator().set_params(integer=True)
    else:
        ax.set_title("Snippet distribution across domains")
        ax.text(0.5, 0.5, "no placed snippets", ha="center", va="center",
                transform=ax.transAxes)
        ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _timeline_figure(report: dict, path: Path) -> Path | None:
    group = _group(report, "thoroughness", "Research Process") or {"data": {}}
    timeline = group.get("data", {}).get("timeline")
    if not timeline or not timeline.get("entries"):
        return None
    rows = []  # (label, shade_index, is_query, snippet_count)
    for entry in timeline["entries"]:
        label = entry["query"] if entry["query"] is not None else "(no query)"
        rows.append((label, entry["shade_index"], True, len(entry["snippet_ids"])))
        for page in entry["pages"]:
            rows.append((page["url"], page["shade_index"], False,
                         len(page["snippet_ids"])))
    n = max(timeline.get("node_count", len(rows)), 1)
    cmap = matplotlib.colormaps["Purples"]
    fig, ax = plt.subplots(figsize=(8, max(2.0, 0.42 * len(rows) + 1)))
    for y, (label, shade, is_query, snippets) in enumerate(reversed(rows)):
        # map shade 0..n-1 onto the ramp, keeping the low end visible
        color = cmap(0.25 + 0.7 * (shade / max(n - 1, 1)))
        ax.barh(y, 1.0, color=color, edgecolor="white")
        text = _shorten(label, 58 if is_query else 52)
        if snippets:
            text += f"  [{snippets} snippet{'s' if snippets != 1 else ''}]"
        ax.text(0.01, y, text, va="center", ha="left", fontsize=8,
                fontweight="bold" if is_query else "normal",
                color="black")
    ax.set_xlim(0, 1)
    ax.set_yticks([])
    ax.set_xticks([])
    ax.set_title("Research process timeline (lighter = older)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _shorten(text: str, limit: int) -> str:
    return text if len(text) <= limit else text[: limit - 1] + "…"


def _stats_csvs(report: dict, out: Path) -> list[Path]:
    written = []
    queries = (_group(report, "context", "Search Queries") or {"data": {}})
    query_rows = queries.get("data", {}).get("queries", [])
    query_path = out / "query_stats.csv"
    with query_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["query", "ordinal", "effective_seconds", "snippet_count"])
        for row in query_rows:
            writer.writerow([row["query"], row["ordinal"],
                             row["effective_seconds"], row["snippet_count"]])
    written.append(query_path)

    process = (_group(report, "thoroughness", "Research Process") or {"data": {}})
    page_rows = process.get("data", {}).get("pages", [])
    page_path = out / "page_stats.csv"
    with page_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["url", "effective_seconds", "max_scroll", "snippet_count"])
        for row in page_rows:
            writer.writerow([row["url"], row["effective_seconds"],
                             row["max_scroll"], row["snippet_count"]])
    written.append(page_path)
    return written
