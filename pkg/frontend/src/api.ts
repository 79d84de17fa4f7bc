// Thin client for the /api/v1 surface. Fetch is injectable so contract
// tests can record every request; identical in-flight GETs are de-duped.

import type { Adjustment, Report, Snapshot, Timeline } from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(
    private baseUrl: string,
    private consumerId: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private headers(): Record<string, string> {
    return {
      "Content-Type": "application/json",
      "X-Consumer-Id": this.consumerId,
    };
  }

  private async getJson<T>(path: string): Promise<T> {
    const url = `${this.baseUrl}${path}`;
    const pending = this.inflight.get(url);
    if (pending) {
      return pending as Promise<T>;
    }
    const request = (async () => {
      try {
        const response = await this.fetchImpl(url, { headers: this.headers() });
        if (!response.ok) {
          throw new ApiError(response.status, `GET ${path} -> ${response.status}`);
        }
        return (await response.json()) as T;
      } finally {
        this.inflight.delete(url);
      }
    })();
    this.inflight.set(url, request);
    return request;
  }

  private async send<T>(method: string, path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: this.headers(),
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw new ApiError(response.status, `${method} ${path} -> ${response.status}`);
    }
    return (await response.json()) as T;
  }

  listTables(): Promise<{ tables: { id: string; title: string }[] }> {
    return this.getJson("/api/v1/tables");
  }

  fetchReport(tableId: string, now?: string): Promise<Report> {
    const query = now ? `?now=${encodeURIComponent(now)}` : "";
    return this.getJson(`/api/v1/tables/${tableId}/report${query}`);
  }

  fetchTimeline(tableId: string, now?: string): Promise<{ state: string; timeline: Timeline | null }> {
    const query = now ? `?now=${encodeURIComponent(now)}` : "";
    return this.getJson(`/api/v1/tables/${tableId}/timeline${query}`);
  }

  fetchSnapshot(tableId: string, snippetId: string): Promise<Snapshot> {
    return this.getJson(`/api/v1/tables/${tableId}/snippets/${snippetId}/snapshot`);
  }

  getWhitelist(): Promise<{ domains: string[]; source: string }> {
    return this.getJson("/api/v1/consumer/whitelist");
  }

  putWhitelist(domains: string[]): Promise<{ domains: string[]; source: string }> {
    return this.send("PUT", "/api/v1/consumer/whitelist", { domains });
  }

  postAdjustment(adjustment: Adjustment): Promise<{ report: Report }> {
    return this.send("POST", "/api/v1/consumer/adjustments", adjustment);
  }
}
