// Contract tests against golden reports produced by the engine: every
// rendered value must exist verbatim in the fetched report, group toggles
// must never issue write requests, and the add-as-trusted flow must update
// the badge after a refetch.

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { App } from "../src/app";
import type { Report, TimelineEntry } from "../src/types";
import { GROUP_TITLES } from "../src/types";
import { timelineOf } from "../src/viewmodel";
import { StubApi } from "./stub";

const FIXTURES = join(__dirname, "fixtures");
const golden: Report = JSON.parse(
  readFileSync(join(FIXTURES, "report.json"), "utf-8"));
const afterAddTrusted: Report = JSON.parse(
  readFileSync(join(FIXTURES, "report_after_add_trusted.json"), "utf-8"));

const TABLE_ID = golden.table_id;

function freshGolden(): Report {
  return JSON.parse(JSON.stringify(golden));
}

describe("rendering from the golden report", () => {
  let app: App;
  let stub: StubApi;

  beforeEach(async () => {
    stub = new StubApi();
    stub.route("GET", `/api/v1/tables/${TABLE_ID}/report`, freshGolden);
    app = new App(new ApiClient("", "test-consumer", stub.fetch), TABLE_ID,
                  golden.now);
    await app.load();
  });

  it("shows each facet badge exactly as reported", () => {
    const html = app.html();
    for (const facet of ["context", "trustworthiness", "thoroughness"] as const) {
      const badge = golden.facets[facet].badge;
      const match = html.match(new RegExp(
        `<span class="badge ${badge.level}" data-badge-facet="${facet}">([^<]*)</span>`));
      expect(match, `badge for ${facet}`).not.toBeNull();
      const label = badge.level === "none" ? "" : String(badge.open_issues);
      expect(match![1]).toBe(label);
    }
    // the demo table: trustworthiness is red with count 2
    expect(golden.facets.trustworthiness.badge).toEqual(
      { level: "red", open_issues: 2 });
    expect(html).toContain(`data-badge-facet="trustworthiness">2<`);
  });

  it("renders a clean table when no groups are activated", () => {
    const html = app.html();
    expect(app.state.cleanTable).toBe(true);
    expect(html).toContain('decision-table clean');
    expect(html).not.toContain('class="chip');
  });

  it("overlays per-snippet annotations verbatim when groups activate", () => {
    app.selectFacet("trustworthiness");
    app.toggleGroup("Domains");
    app.toggleGroup("Evidence Snippets");
    const html = app.html();

    const s1 = golden.snippet_annotations["s1"];
    expect(s1.popularity).not.toBeNull();
    expect(html).toContain(`${s1.popularity!.count} ▲`);   // "42 ▲"
    expect(html).toContain(">accepted<");
    expect(html).toContain(`updated ${s1.last_updated!.slice(0, 10)}`);

    const s2 = golden.snippet_annotations["s2"];
    expect(s2.domain_trusted).toBe(false);
    expect(html).toContain(`<span class="chip warn">${s2.domain}</span>`);

    const s4 = golden.snippet_annotations["s4"];
    expect(s4.age_unknown).toBe(true);
    expect(html).toContain("age unknown");
  });

  it("lists issues with their statuses and actions", () => {
    app.selectFacet("trustworthiness");
    const html = app.html();
    for (const issue of golden.facets.trustworthiness.issues) {
      expect(html).toContain(`data-issue-id="${issue.id}"`);
      expect(html).toContain(issue.message);
    }
    expect(html).toContain('data-action="add-trusted" data-domain="techgeekbuzz.com"');
  });

  it("applies chronological shading when Research Process activates", () => {
    app.selectFacet("thoroughness");
    app.toggleGroup("Research Process");
    const html = app.html();
    const timeline = timelineOf(golden)!;
    const s1 = golden.snippet_annotations["s1"];
    expect(s1.timeline_shade).not.toBeNull();
    // lighter-to-darker single-hue ramp; shade value taken from the report
    expect(html).toMatch(/data-snippet-id="s1" style="background:hsl\(267/);
    expect(timeline.node_count).toBeGreaterThan(1);
  });

  it("highlights the hovered timeline node's snippets", () => {
    app.selectFacet("thoroughness");
    app.toggleGroup("Research Process");
    const timeline = timelineOf(golden)!;
    const entry: TimelineEntry = timeline.entries.find(
      (e) => e.snippet_ids.length > 0)!;

    app.hoverNode("query", entry.shade_index);
    let html = app.html();
    for (const sid of entry.snippet_ids) {
      expect(html).toContain(
        `<article class="snippet highlighted" data-snippet-id="${sid}"`);
    }

    const page = timeline.entries.flatMap((e) => e.pages)
      .find((p) => p.snippet_ids.length > 0)!;
    app.hoverNode("page", page.shade_index);
    html = app.html();
    for (const sid of page.snippet_ids) {
      expect(html).toContain(
        `<article class="snippet highlighted" data-snippet-id="${sid}"`);
    }

    app.clearHover();
    expect(app.html()).not.toContain("snippet highlighted");
  });

  it("issues zero write requests while toggling every group and facet", () => {
    const before = stub.calls.length;
    for (const facet of ["context", "trustworthiness", "thoroughness"] as const) {
      app.selectFacet(facet);
      for (const group of GROUP_TITLES[facet]) {
        app.toggleGroup(group);
        app.html();
        app.toggleGroup(group);
        app.html();
      }
    }
    app.hoverNode("query", 0);
    app.html();
    app.clearHover();
    expect(stub.writes()).toEqual([]);
    expect(stub.calls.length).toBe(before);  // not even reads
  });
});

describe("adjustment flows", () => {
  it("add-as-trusted posts, refetches, and recounts the badge", async () => {
    const stub = new StubApi();
    let current: Report = freshGolden();
    stub.route("GET", `/api/v1/tables/${TABLE_ID}/report`, () => current);
    stub.route("POST", "/api/v1/consumer/adjustments", () => {
      current = afterAddTrusted;
      return { report: afterAddTrusted };
    });
    const app = new App(new ApiClient("", "test-consumer", stub.fetch),
                        TABLE_ID, golden.now);
    await app.load();
    expect(app.html()).toContain(`data-badge-facet="trustworthiness">2<`);

    app.selectFacet("trustworthiness");
    await app.addTrusted("techgeekbuzz.com");

    const methods = stub.calls.map((c) => c.method);
    expect(methods).toEqual(["GET", "POST", "GET"]);
    const post = stub.calls[1];
    expect(post.body).toMatchObject(
      { action: "add_trusted", domain: "techgeekbuzz.com", table_id: TABLE_ID });

    const html = app.html();
    expect(html).toContain(`data-badge-facet="trustworthiness">1<`);
    expect(html).toMatch(/issue resolved[^>]*data-issue-id="untrusted_domain:techgeekbuzz.com"/);
    expect(afterAddTrusted.facets.trustworthiness.badge).toEqual(
      { level: "yellow", open_issues: 1 });
  });

  it("dismiss posts the issue id and refetches", async () => {
    const stub = new StubApi();
    stub.route("GET", `/api/v1/tables/${TABLE_ID}/report`, freshGolden);
    stub.route("POST", "/api/v1/consumer/adjustments",
               () => ({ report: freshGolden() }));
    const app = new App(new ApiClient("", "test-consumer", stub.fetch),
                        TABLE_ID, golden.now);
    await app.load();
    await app.dismissIssue("conflicting_cell:o1:c1");
    const post = stub.calls.find((c) => c.method === "POST")!;
    expect(post.body).toMatchObject(
      { action: "dismiss", issue_id: "conflicting_cell:o1:c1" });
    expect(stub.calls[stub.calls.length - 1].method).toBe("GET");
  });

  it("consumer header travels on every request", async () => {
    const stub = new StubApi();
    stub.route("GET", `/api/v1/tables/${TABLE_ID}/report`, freshGolden);
    const client = new ApiClient("", "consumer-xyz", async (url, init) => {
      expect((init?.headers as Record<string, string>)["X-Consumer-Id"])
        .toBe("consumer-xyz");
      return stub.fetch(url, init);
    });
    const app = new App(client, TABLE_ID, golden.now);
    await app.load();
    expect(app.report).not.toBeNull();
  });
});

describe("degraded states from the report", () => {
  it("shows the alternatives group as unavailable verbatim", async () => {
    const degraded = freshGolden();
    const group = degraded.facets.thoroughness.groups.find(
      (g) => g.name === "Commonly Searched for Alternatives")!;
    group.state = "unavailable";
    group.data = { alternatives: [] };
    const stub = new StubApi();
    stub.route("GET", `/api/v1/tables/${TABLE_ID}/report`, () => degraded);
    const app = new App(new ApiClient("", "c", stub.fetch), TABLE_ID);
    await app.load();
    app.selectFacet("thoroughness");
    expect(app.html()).toContain("unavailable");
  });

  it("offers a retry affordance when the report fetch fails", async () => {
    const stub = new StubApi();  // nothing routed -> 404
    const app = new App(new ApiClient("", "c", stub.fetch), TABLE_ID);
    await app.load();
    expect(app.html()).toContain('data-action="retry"');
  });
});
