// Pure projections from (report, view state) to render-ready values.
// Every number or label comes verbatim out of the report; this module
// only selects and formats, never computes signals.

import type { Report, SnippetAnnotation, Timeline, TimelineEntry } from "./types";
import type { HoverTarget, ViewState } from "./state";

export interface Chip {
  text: string;
  tone: "plain" | "good" | "warn" | "info";
  action?: { name: string; arg: string };
}

export function badgeLabel(level: string, openIssues: number): string {
  return level === "none" ? "" : String(openIssues);
}

// Single-hue violet ramp; lighter = older (smaller shade index).
export function shadeColor(shadeIndex: number, nodeCount: number): string {
  const span = Math.max(nodeCount - 1, 1);
  const t = Math.min(Math.max(shadeIndex / span, 0), 1);
  const lightness = 92 - 50 * t;
  return `hsl(267, 45%, ${lightness}%)`;
}

export function timelineOf(report: Report): Timeline | null {
  const process = report.facets.thoroughness.groups.find(
    (g) => g.name === "Research Process");
  const timeline = process?.data["timeline"];
  return (timeline as Timeline | null) ?? null;
}

export function snippetChips(report: Report, state: ViewState,
                             snippetId: string): Chip[] {
  const note: SnippetAnnotation | undefined =
    report.snippet_annotations[snippetId];
  if (!note || state.cleanTable) {
    return [];
  }
  const chips: Chip[] = [];
  if (state.isActivated("Domains") && note.domain) {
    chips.push({
      text: note.domain,
      tone: note.domain_trusted ? "good" : "warn",
    });
  }
  if (state.isActivated("Evidence Snippets")) {
    if (note.popularity) {
      if (note.popularity.kind === "upvotes") {
        chips.push({
          text: `${note.popularity.count} ▲`,
          tone: note.popularity.count < 0 ? "warn" : "plain",
        });
        if (note.popularity.accepted) {
          chips.push({ text: "accepted", tone: "good" });
        }
      } else {
        chips.push({ text: `${note.popularity.count} claps`, tone: "plain" });
      }
    }
    if (note.last_updated) {
      chips.push({ text: `updated ${note.last_updated.slice(0, 10)}`, tone: "info" });
    } else if (note.age_unknown) {
      chips.push({ text: "age unknown", tone: "warn" });
    }
  }
  if (state.isActivated("Languages, Frameworks, and Platforms")) {
    for (const detection of note.detections) {
      const version = detection.version ? ` ${detection.version}` : "";
      chips.push({ text: `${detection.name}${version}`, tone: "info" });
    }
  }
  if (state.isActivated("Code Examples") && note.contains_code) {
    chips.push({ text: "contains code", tone: "info" });
  }
  if (state.isActivated("Snippet Surroundings") && note.has_surroundings) {
    chips.push({
      text: "surroundings",
      tone: "plain",
      action: { name: "open-snapshot", arg: snippetId },
    });
  }
  return chips;
}

export function cellShade(report: Report, state: ViewState,
                          snippetId: string): string | null {
  if (!state.isActivated("Research Process")) {
    return null;
  }
  const note = report.snippet_annotations[snippetId];
  const timeline = timelineOf(report);
  if (!note || note.timeline_shade === null || !timeline) {
    return null;
  }
  return shadeColor(note.timeline_shade, timeline.node_count);
}

function entryForHover(timeline: Timeline,
                       target: HoverTarget): TimelineEntry | null {
  for (const entry of timeline.entries) {
    if (target.kind === "query" && entry.shade_index === target.shade) {
      return entry;
    }
  }
  return null;
}

// Mousing over a query node highlights every snippet collected in its
// span; a page node highlights the snippets collected on that visit.
export function highlightedSnippetIds(report: Report,
                                      state: ViewState): Set<string> {
  const highlighted = new Set<string>();
  const target = state.hoverTarget;
  if (!target || !state.isActivated("Research Process")) {
    return highlighted;
  }
  const timeline = timelineOf(report);
  if (!timeline) {
    return highlighted;
  }
  if (target.kind === "query") {
    const entry = entryForHover(timeline, target);
    if (entry) {
      entry.snippet_ids.forEach((sid) => highlighted.add(sid));
      entry.pages.forEach((p) => p.snippet_ids.forEach((sid) => highlighted.add(sid)));
    }
  } else {
    for (const entry of timeline.entries) {
      for (const page of entry.pages) {
        if (page.shade_index === target.shade) {
          page.snippet_ids.forEach((sid) => highlighted.add(sid));
        }
      }
    }
  }
  return highlighted;
}

// Mark the highlighted slice of a context snapshot in yellow. The slice is
// located against the markup's text content; when the exact run does not
// sit inside a single text node, the caller falls back to showing the
// slice above the viewer.
export function markHighlight(surroundings: string, slice: string): {
  html: string; marked: boolean;
} {
  const escaped = escapeHtml(slice);
  const index = surroundings.indexOf(escaped);
  if (escaped && index >= 0) {
    const html = surroundings.slice(0, index)
      + `<mark class="snippet-highlight">` + escaped + `</mark>`
      + surroundings.slice(index + escaped.length);
    return { html, marked: true };
  }
  return { html: surroundings, marked: false };
}

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function sliceOf(plainText: string, start: number, end: number): string {
  return plainText.slice(start, end);
}
