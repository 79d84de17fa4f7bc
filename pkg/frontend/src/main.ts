// DOM bootstrap: mount the app, delegate events to controller actions.

import { ApiClient } from "./api";
import { App } from "./app";
import type { FacetName } from "./types";

function consumerId(): string {
  const key = "tablevet-consumer";
  let id = localStorage.getItem(key);
  if (!id) {
    id = `consumer-${Math.random().toString(36).slice(2, 10)}`;
    localStorage.setItem(key, id);
  }
  return id;
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const params = new URLSearchParams(location.search);
  const base = params.get("api") ?? "";
  const api = new ApiClient(base, consumerId());

  let tableId = params.get("table");
  if (!tableId) {
    const listing = await api.listTables();
    tableId = listing.tables[0]?.id ?? null;
  }
  if (!tableId) {
    root.innerHTML = `<div class="load-error">No tables imported yet.</div>`;
    return;
  }

  const app = new App(api, tableId, params.get("now") ?? undefined);
  const rerender = () => {
    root.innerHTML = app.html();
  };
  await app.load();
  rerender();

  root.addEventListener("click", async (event) => {
    const el = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!el) {
      return;
    }
    const action = el.dataset["action"];
    switch (action) {
      case "facet":
        app.selectFacet(el.dataset["facet"] as FacetName);
        break;
      case "toggle-group":
        app.toggleGroup(el.dataset["group"] ?? "");
        break;
      case "add-trusted":
        await app.addTrusted(el.dataset["domain"] ?? "");
        break;
      case "remove-trusted":
        await app.removeTrusted(el.dataset["domain"] ?? "");
        break;
      case "dismiss":
        await app.dismissIssue(el.dataset["issue"] ?? "");
        break;
      case "open-snapshot":
        await app.openSnapshot(el.dataset["arg"] ?? "");
        break;
      case "close-snapshot":
        app.closeSnapshot();
        break;
      case "retry":
        await app.load();
        break;
      default:
        return;
    }
    rerender();
  });

  root.addEventListener("mouseover", (event) => {
    const el = (event.target as HTMLElement)
      .closest<HTMLElement>('[data-action="hover-node"]');
    if (!el) {
      return;
    }
    event.stopPropagation();
    app.hoverNode(el.dataset["nodeKind"] as "query" | "page",
                  Number(el.dataset["nodeShade"]));
    rerender();
  });

  root.addEventListener("mouseleave", () => {
    if (app.state.hoverTarget) {
      app.clearHover();
      rerender();
    }
  }, true);
}

void boot();
