// Recording fetch stub: routes by "METHOD path" prefix, logs every call.

import type { FetchLike } from "../src/api";

export interface RecordedCall {
  method: string;
  url: string;
  body: unknown;
}

export class StubApi {
  calls: RecordedCall[] = [];
  private routes = new Map<string, () => unknown>();

  route(method: string, pathPrefix: string, payload: () => unknown): void {
    this.routes.set(`${method} ${pathPrefix}`, payload);
  }

  get fetch(): FetchLike {
    return async (url, init) => {
      const method = init?.method ?? "GET";
      this.calls.push({
        method,
        url,
        body: init?.body ? JSON.parse(String(init.body)) : null,
      });
      for (const [key, payload] of this.routes) {
        const [routeMethod, prefix] = key.split(" ", 2);
        if (routeMethod === method && url.startsWith(prefix)) {
          return new Response(JSON.stringify(payload()), {
            status: 200,
            headers: { "Content-Type": "application/json" },
          });
        }
      }
      return new Response(JSON.stringify({ detail: "not stubbed" }),
                          { status: 404 });
    };
  }

  writes(): RecordedCall[] {
    return this.calls.filter((c) => c.method !== "GET");
  }
}
