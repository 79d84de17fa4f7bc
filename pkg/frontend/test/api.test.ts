import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";

describe("ApiClient", () => {
  it("de-duplicates identical in-flight GETs", async () => {
    let hits = 0;
    const client = new ApiClient("", "c", async () => {
      hits += 1;
      await new Promise((resolve) => setTimeout(resolve, 5));
      return new Response(JSON.stringify({ tables: [] }), { status: 200 });
    });
    await Promise.all([client.listTables(), client.listTables()]);
    expect(hits).toBe(1);
    await client.listTables();  // a later call fetches again
    expect(hits).toBe(2);
  });

  it("raises ApiError with the status code", async () => {
    const client = new ApiClient("", "c", async () =>
      new Response("{}", { status: 404 }));
    await expect(client.fetchReport("nope")).rejects.toMatchObject(
      { status: 404 });
    await expect(client.fetchReport("nope")).rejects.toBeInstanceOf(ApiError);
  });

  it("encodes the now parameter", async () => {
    let seen = "";
    const client = new ApiClient("", "c", async (url) => {
      seen = url;
      return new Response("{}", { status: 200 });
    });
    await client.fetchReport("t1", "2021-02-01T00:00:00Z");
    expect(seen).toBe(
      "/api/v1/tables/t1/report?now=2021-02-01T00%3A00%3A00Z");
  });
});
