// The controller: owns the report, the view state, and the API client.
// Group toggles and hovers only touch view state (zero write requests);
// whitelist edits and issue actions post an adjustment and then refetch
// the report so every rendered number still comes from the server.

import { ApiClient } from "./api";
import { renderApp, renderSnapshotViewer } from "./render";
import { ViewState } from "./state";
import type { FacetName, Report } from "./types";
import { markHighlight, sliceOf } from "./viewmodel";

export class App {
  readonly state = new ViewState();
  report: Report | null = null;
  lastError: string | null = null;
  snapshotHtml = "";

  constructor(
    private api: ApiClient,
    private tableId: string,
    private now?: string,
  ) {}

  async load(): Promise<void> {
    try {
      this.report = await this.api.fetchReport(this.tableId, this.now);
      this.lastError = null;
    } catch (error) {
      this.lastError = String(error);
    }
  }

  html(): string {
    if (!this.report) {
      return `<div class="load-error">Could not load the report.
        <button data-action="retry">retry</button>
        ${this.lastError ? `<p class="muted">${this.lastError}</p>` : ""}</div>`;
    }
    return renderApp(this.report, this.state) + this.snapshotHtml;
  }

  // -- presentational actions (never issue requests) --------------------

  selectFacet(facet: FacetName): void {
    this.state.selectFacet(facet);
  }

  toggleGroup(name: string): void {
    this.state.toggleGroup(name);
  }

  hoverNode(kind: "query" | "page", shade: number): void {
    this.state.setHover({ kind, shade });
  }

  clearHover(): void {
    this.state.setHover(null);
  }

  // -- adjustments (post, then refetch) ----------------------------------

  private async adjust(payload: Record<string, unknown>): Promise<void> {
    this.state.pendingAdjustments += 1;
    try {
      await this.api.postAdjustment({
        table_id: this.tableId,
        now: this.now,
        ...payload,
      } as never);
      this.report = await this.api.fetchReport(this.tableId, this.now);
      this.lastError = null;
    } catch (error) {
      this.lastError = String(error);
    } finally {
      this.state.pendingAdjustments -= 1;
    }
  }

  addTrusted(domain: string): Promise<void> {
    return this.adjust({ action: "add_trusted", domain });
  }

  removeTrusted(domain: string): Promise<void> {
    return this.adjust({ action: "remove_trusted", domain });
  }

  dismissIssue(issueId: string): Promise<void> {
    return this.adjust({ action: "dismiss", issue_id: issueId });
  }

  // -- context snapshot viewer -------------------------------------------

  async openSnapshot(snippetId: string): Promise<void> {
    const snapshot = await this.api.fetchSnapshot(this.tableId, snippetId);
    const plain = textOf(snapshot.surroundings);
    const slice = sliceOf(plain, snapshot.highlight.start, snapshot.highlight.end);
    const { html, marked } = markHighlight(snapshot.surroundings, slice);
    this.snapshotHtml = renderSnapshotViewer(
      html, marked, slice, snapshot.includes_question_block);
  }

  closeSnapshot(): void {
    this.snapshotHtml = "";
  }
}

// Plain-text projection of markup, mirroring the server's collapse rules
// closely enough to locate the highlight slice.
export function textOf(markup: string): string {
  const withBreaks = markup
    .replace(/<(script|style)[^>]*>[\s\S]*?<\/\1>/gi, " ")
    .replace(/<[^>]+>/g, " ");
  return decodeEntities(withBreaks).replace(/\s+/g, " ").trim();
}

function decodeEntities(value: string): string {
  return value
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&quot;/g, '"')
    .replace(/&#x27;/g, "'")
    .replace(/&amp;/g, "&");
}
