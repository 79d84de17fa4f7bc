"""Plain-text rendering of a report for the CLI."""

from __future__ import annotations

_BADGE_GLYPHS = {"none": "[OK]", "yellow": "[YELLOW {n}]", "red": "[RED {n}]"}

_STATUS_GLYPHS = {"open": "▼", "dismissed": "○", "resolved": "▲"}


def _badge(badge: dict) -> str:
    return _BADGE_GLYPHS[badge["level"]].format(n=badge["open_issues"])


def render_text(report: dict) -> str:
    lines: list[str] = []
    lines.append(f"{report['title']}  (table {report['table_id']})")
    lines.append(f"appraised as of {report['now']}")
    lines.append("=" * 64)
    for facet in ("context", "trustworthiness", "thoroughness"):
        panel = report["facets"][facet]
        lines.append("")
        lines.append(f"{facet.upper():<48}{_badge(panel['badge'])}")
        lines.append("-" * 64)
        for group in panel["groups"]:
            _render_group(lines, group)
        for issue in panel["issues"]:
            glyph = _STATUS_GLYPHS.get(issue["status"], "?")
            lines.append(f"  {glyph} {issue['message']} [{issue['status']}]")
    return "\n".join(lines) + "\n"


def _render_group(lines: list[str], group: dict) -> None:
    name, state, data = group["name"], group["state"], group["data"]
    suffix = "" if state == "ok" else f"  ({state.replace('_', ' ')})"
    lines.append(f"  {name}{suffix}")
    if state != "ok":
        return
    if name == "Search Queries":
        for q in data["queries"]:
            lines.append(
                f"    {q['snippet_count']:>2} snippets  "
                f"{q['effective_seconds']:>7.1f}s  \"{q['query']}\"")
    elif name == "Languages, Frameworks, and Platforms":
        for tech in data["technologies"]:
            versions = f" {', '.join(tech['versions'])}" if tech["versions"] else ""
            lines.append(
                f"    {tech['name']}{versions} ({tech['category']}, "
                f"{len(tech['snippet_ids'])} snippet"
                f"{'s' if len(tech['snippet_ids']) != 1 else ''})")
    elif name == "Snippet Surroundings":
        lines.append(f"    context snapshots for {data['available']}"
                     f"/{data['total']} snippets")
    elif name == "Domains":
        for row in data["distribution"]:
            mark = "trusted" if row["trusted"] else "UNTRUSTED"
            lines.append(f"    {row['domain']:<32} x{row['count']:<3} {mark}")
    elif name == "Evidence Snippets":
        lines.append(f"    stale: {len(data['stale_snippet_ids'])}, "
                     f"age unknown: {len(data['age_unknown_snippet_ids'])}, "
                     f"down-voted: {len(data['low_popularity_snippet_ids'])}, "
                     f"conflicting cells: {len(data['conflict_cells'])}")
    elif name == "Task Author":
        if data:
            stars = ", ".join(f"{name_} ({stars_}★)"
                              for name_, stars_ in data["top_repo_stars"])
            lines.append(f"    {data['display_name']}"
                         + (f" · {data['affiliation']}" if data.get("affiliation") else ""))
            if stars:
                lines.append(f"    top repos: {stars}")
            if data.get("top_languages"):
                lines.append(f"    languages: {', '.join(data['top_languages'])}")
    elif name == "Research Process":
        summary = data["summary"]
        lines.append(
            f"    {summary['option_count']} options, "
            f"{summary['criterion_count']} criteria, "
            f"{summary['evidence_count']} evidence snippets")
        lines.append(
            f"    effective work time {summary['total_effective_seconds']:.0f}s, "
            f"last updated {summary['last_updated_age_days']} days ago")
        timeline = data.get("timeline")
        if timeline:
            for entry in timeline["entries"]:
                label = entry["query"] if entry["query"] is not None else "(no query)"
                lines.append(f"    #{entry['shade_index']:<3}\"{label}\"")
                for page in entry["pages"]:
                    lines.append(f"      #{page['shade_index']:<3}{page['url']}")
    elif name == "Commonly Searched for Alternatives":
        for alt in data["alternatives"]:
            lines.append(f"    {alt['name']} "
                         f"(seen for {alt['supporting_options']} option"
                         f"{'s' if alt['supporting_options'] != 1 else ''})")
    elif name == "Code Examples":
        lines.append(f"    {len(data['examples'])} code example"
                     f"{'s' if len(data['examples']) != 1 else ''} extracted")
        chosen = data.get("chosen_option")
        if chosen:
            lines.append(
                f"    author likely chose: {chosen['option_name']} "
                f"(confidence {chosen['confidence']:.2f}, heuristic)")
