// HTML builders. Interactions are declared with data-action attributes and
// wired by main.ts via event delegation; building markup issues no
// requests and reads nothing but the report and the view state.

import type {
  FacetName,
  FacetPanel,
  Issue,
  Report,
  SignalGroup,
  Timeline,
} from "./types";
import { FACETS } from "./types";
import type { ViewState } from "./state";
import {
  badgeLabel,
  cellShade,
  escapeHtml as esc,
  highlightedSnippetIds,
  shadeColor,
  snippetChips,
} from "./viewmodel";

const STATUS_GLYPHS: Record<string, string> = {
  open: "▼",
  dismissed: "○",
  resolved: "▲",
};

const FACET_LABELS: Record<FacetName, string> = {
  context: "Context",
  trustworthiness: "Trustworthiness",
  thoroughness: "Thoroughness",
};

export function renderApp(report: Report, state: ViewState): string {
  return `
<div class="layout">
  <aside class="sidebar">
    <header class="table-head">
      <h1>${esc(report.title)}</h1>
      <span class="muted">as of ${esc(report.now)}</span>
    </header>
    ${renderTabs(report, state)}
    ${renderPanel(report, state)}
  </aside>
  <section class="table-pane">
    ${renderTable(report, state)}
  </section>
  <div id="snapshot-host"></div>
</div>`;
}

function renderTabs(report: Report, state: ViewState): string {
  const tabs = FACETS.map((facet) => {
    const badge = report.facets[facet].badge;
    const active = state.activeFacet === facet ? " active" : "";
    const label = badgeLabel(badge.level, badge.open_issues);
    const badgeHtml = label
      ? `<span class="badge ${badge.level}" data-badge-facet="${facet}">${label}</span>`
      : `<span class="badge none" data-badge-facet="${facet}"></span>`;
    return `<button class="tab${active}" data-action="facet" data-facet="${facet}">`
      + `${FACET_LABELS[facet]} ${badgeHtml}</button>`;
  });
  return `<nav class="tabs">${tabs.join("")}</nav>`;
}

function renderPanel(report: Report, state: ViewState): string {
  const panel: FacetPanel = report.facets[state.activeFacet];
  const groups = panel.groups.map((g) => renderGroup(g, state)).join("");
  const issues = panel.issues.length
    ? `<ul class="issues">${panel.issues.map((i) => renderIssue(i)).join("")}</ul>`
    : "";
  return `<div class="panel" data-facet-panel="${state.activeFacet}">${groups}${issues}</div>`;
}

function renderIssue(issue: Issue): string {
  const glyph = STATUS_GLYPHS[issue.status] ?? "?";
  const actions: string[] = [];
  if (issue.status === "open") {
    if (issue.kind === "untrusted_domain" && issue.domain) {
      actions.push(`<button data-action="add-trusted" data-domain="${esc(issue.domain)}">add as trusted</button>`);
    }
    actions.push(`<button data-action="dismiss" data-issue="${esc(issue.id)}">dismiss</button>`);
  }
  return `<li class="issue ${issue.status}" data-issue-id="${esc(issue.id)}">`
    + `<span class="glyph">${glyph}</span> ${esc(issue.message)}`
    + `<span class="issue-status">[${issue.status}]</span> ${actions.join(" ")}</li>`;
}

function renderGroup(group: SignalGroup, state: ViewState): string {
  const activated = state.isActivated(group.name) ? " activated" : "";
  const stateNote = group.state === "ok" ? ""
    : `<span class="group-state">${esc(group.state.replace(/_/g, " "))}</span>`;
  const body = state.isActivated(group.name) && group.state === "ok"
    ? `<div class="group-body">${renderGroupBody(group, state)}</div>`
    : "";
  return `<section class="group${activated}" data-group-section="${esc(group.name)}">`
    + `<h3 data-action="toggle-group" data-group="${esc(group.name)}">`
    + `${esc(group.name)} ${stateNote}</h3>${body}</section>`;
}

function renderGroupBody(group: SignalGroup, state: ViewState): string {
  switch (group.name) {
    case "Search Queries": {
      const queries = group.data["queries"] as {
        query: string; effective_seconds: number; snippet_count: number;
      }[];
      return `<ol class="queries">${queries.map((q) =>
        `<li>“${esc(q.query)}” <span class="muted">`
        + `${q.snippet_count} snippets, ${q.effective_seconds}s</span></li>`).join("")}</ol>`;
    }
    case "Languages, Frameworks, and Platforms": {
      const techs = group.data["technologies"] as {
        name: string; category: string; versions: string[]; snippet_ids: string[];
      }[];
      return `<ul class="tech">${techs.map((t) =>
        `<li>${esc(t.name)}${t.versions.length ? " " + esc(t.versions.join(", ")) : ""}`
        + ` <span class="muted">(${esc(t.category)}, ${t.snippet_ids.length})</span></li>`).join("")}</ul>`;
    }
    case "Snippet Surroundings": {
      const available = group.data["available"];
      const total = group.data["total"];
      return `<p>context snapshots for ${available}/${total} snippets;`
        + ` activate and click a snippet's “surroundings” chip to view</p>`;
    }
    case "Domains": {
      const rows = group.data["distribution"] as {
        domain: string; count: number; trusted: boolean;
      }[];
      const list = rows.map((r) =>
        `<li class="${r.trusted ? "trusted" : "untrusted"}">`
        + `${esc(r.domain)} <span class="muted">x${r.count}</span>`
        + ` ${r.trusted
            ? `<button data-action="remove-trusted" data-domain="${esc(r.domain)}">remove</button>`
            : `<button data-action="add-trusted" data-domain="${esc(r.domain)}">add as trusted</button>`}`
        + `</li>`).join("");
      return `<ul class="domains">${list}</ul>`;
    }
    case "Evidence Snippets": {
      const stale = (group.data["stale_snippet_ids"] as string[]).length;
      const unknown = (group.data["age_unknown_snippet_ids"] as string[]).length;
      const downvoted = (group.data["low_popularity_snippet_ids"] as string[]).length;
      const conflicts = (group.data["conflict_cells"] as unknown[]).length;
      return `<p>stale: ${stale} · age unknown: ${unknown}`
        + ` · down-voted: ${downvoted} · conflicting cells: ${conflicts}</p>`;
    }
    case "Task Author": {
      const name = group.data["display_name"];
      const affiliation = group.data["affiliation"];
      const repos = (group.data["top_repo_stars"] as [string, number][]) ?? [];
      const languages = (group.data["top_languages"] as string[]) ?? [];
      return `<p class="author">${esc(String(name ?? ""))}`
        + `${affiliation ? ` · ${esc(String(affiliation))}` : ""}</p>`
        + `<ul class="repos">${repos.map(([repo, stars]) =>
          `<li>${esc(repo)} <span class="muted">${stars}★</span></li>`).join("")}</ul>`
        + (languages.length
          ? `<p class="muted">languages: ${languages.map(esc).join(", ")}</p>` : "");
    }
    case "Research Process": {
      const summary = group.data["summary"] as Record<string, number>;
      const timeline = group.data["timeline"] as Timeline | null;
      return `<p>${summary["option_count"]} options · `
        + `${summary["criterion_count"]} criteria · `
        + `${summary["evidence_count"]} evidence snippets</p>`
        + `<p class="muted">effective work ${summary["total_effective_seconds"]}s; `
        + `last updated ${summary["last_updated_age_days"]} days ago</p>`
        + (timeline ? renderTimeline(timeline) : "");
    }
    case "Commonly Searched for Alternatives": {
      const alternatives = group.data["alternatives"] as {
        name: string; supporting_options: number;
      }[];
      return `<ol class="alternatives">${alternatives.map((a) =>
        `<li>${esc(a.name)} <span class="muted">seen for ${a.supporting_options}</span></li>`).join("")}</ol>`;
    }
    case "Code Examples": {
      const examples = group.data["examples"] as {
        snippet_id: string; language_hint: string | null; text: string;
      }[];
      const chosen = group.data["chosen_option"] as {
        option_name: string; confidence: number; note: string;
      } | null;
      const chosenHtml = chosen
        ? `<p class="chosen" title="${esc(chosen.note)}">author likely chose `
          + `<strong>${esc(chosen.option_name)}</strong> `
          + `<span class="muted">(confidence ${chosen.confidence}, heuristic)</span></p>`
        : "";
      return chosenHtml + examples.map((e) =>
        `<pre class="code-example" data-snippet="${esc(e.snippet_id)}">`
        + `${e.language_hint ? `<span class="lang">${esc(e.language_hint)}</span>` : ""}`
        + `${esc(e.text)}</pre>`).join("");
    }
    default:
      return "";
  }
}

function renderTimeline(timeline: Timeline): string {
  const rows = timeline.entries.map((entry) => {
    const label = entry.query === null ? "(no query)" : entry.query;
    const pages = entry.pages.map((page) =>
      `<li class="tl-page" data-action="hover-node" data-node-kind="page" `
      + `data-node-shade="${page.shade_index}">`
      + `<span class="swatch" style="background:${shadeColor(page.shade_index, timeline.node_count)}"></span>`
      + `${esc(page.url)} <span class="muted">${page.snippet_ids.length || ""}</span></li>`).join("");
    return `<li class="tl-query" data-action="hover-node" data-node-kind="query" `
      + `data-node-shade="${entry.shade_index}">`
      + `<span class="swatch" style="background:${shadeColor(entry.shade_index, timeline.node_count)}"></span>`
      + `“${esc(label)}”<ul>${pages}</ul></li>`;
  }).join("");
  return `<ul class="timeline">${rows}</ul>`;
}

function renderTable(report: Report, state: ViewState): string {
  const highlighted = highlightedSnippetIds(report, state);
  const cards = new Map(report.table.snippets.map((s) => [s.id, s]));
  const header = `<tr><th></th>${report.table.criteria.map((c) =>
    `<th>${esc(c.name)}</th>`).join("")}</tr>`;
  const cellIndex = new Map(report.table.cells.map(
    (cell) => [`${cell.option_id}:${cell.criterion_id}`, cell.snippet_ids]));
  const rows = report.table.options.map((option) => {
    const cells = report.table.criteria.map((criterion) => {
      const sids = cellIndex.get(`${option.id}:${criterion.id}`) ?? [];
      const cardsHtml = sids.map((sid) => {
        const card = cards.get(sid);
        if (!card) {
          return "";
        }
        const chips = snippetChips(report, state, sid).map((chip) => {
          const action = chip.action
            ? ` data-action="${chip.action.name}" data-arg="${esc(chip.action.arg)}"`
            : "";
          return `<span class="chip ${chip.tone}"${action}>${esc(chip.text)}</span>`;
        }).join("");
        const shade = cellShade(report, state, sid);
        const style = shade ? ` style="background:${shade}"` : "";
        const highlight = highlighted.has(sid) ? " highlighted" : "";
        const rating = card.rating ? `<span class="rating ${card.rating}"></span>` : "";
        return `<article class="snippet${highlight}" data-snippet-id="${esc(sid)}"${style}>`
          + `${rating}<span class="excerpt">${esc(card.excerpt)}</span>`
          + (chips ? `<div class="chips">${chips}</div>` : "")
          + `</article>`;
      }).join("");
      return `<td>${cardsHtml}</td>`;
    }).join("");
    return `<tr><th class="option">${esc(option.name)}</th>${cells}</tr>`;
  }).join("");
  return `<table class="decision-table${state.cleanTable ? " clean" : ""}">`
    + `${header}${rows}</table>`;
}

export function renderSnapshotViewer(surroundingsHtml: string, marked: boolean,
                                     slice: string,
                                     includesQuestion: boolean): string {
  const fallback = marked ? ""
    : `<p class="muted">collected content: <mark class="snippet-highlight">${esc(slice)}</mark></p>`;
  const note = includesQuestion
    ? `<span class="muted">includes the original question block</span>` : "";
  // sandboxed: no scripts, no same-origin access
  return `<div class="snapshot-viewer">
  <header>Snippet surroundings ${note}
    <button data-action="close-snapshot">close</button></header>
  ${fallback}
  <iframe sandbox="" srcdoc="${esc(wrapSnapshotDoc(surroundingsHtml))}"></iframe>
</div>`;
}

function wrapSnapshotDoc(body: string): string {
  return `<!DOCTYPE html><html><head><style>
    body { font: 14px/1.5 system-ui, sans-serif; margin: 12px; color: #222; }
    mark.snippet-highlight { background: #ffec3d; }
    pre { background: #f4f2f7; padding: 8px; overflow-x: auto; }
  </style></head><body>${body}</body></html>`;
}
