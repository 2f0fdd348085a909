import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { createClient, type FetchLike } from "../src/api.js";
import { DEBOUNCE_MS, ScenarioEditor } from "../src/editor.js";
import type { CoverageDoc, ScenarioDoc } from "../src/types.js";

const COVERAGE: CoverageDoc = {
  schema: "seamesh-coverage/1",
  bbox: [0, 0, 200, 100],
  resolution_m: 100,
  nx: 2,
  ny: 1,
  cells: [
    [140.51, 93.68, "bs-1", 1],
    [0, 0, null, 0],
  ],
};

const BASE_DOC: ScenarioDoc = {
  name: "stub",
  origin: { lat: 22.3, lon: 39.1 },
  extent: [0, 0, 1000, 1000],
  nodes: [
    {
      id: "bs-1",
      kind: "base_station",
      position: [100, 100],
      antenna_height_m: 18,
      gateway: true,
      radio: {
        band: "5GHz",
        center_frequency_hz: 5.5e9,
        channel_width_mhz: 160,
        tx_power_dbm: 27,
      },
    },
  ],
};

interface Call {
  method: string;
  url: string;
  body?: unknown;
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

/**
 * Stubbed service: records every request and answers PUT / coverage GET /
 * scenario GET with canned documents. Individual tests override `respond`
 * to fail specific requests.
 */
function stubService(coverage: CoverageDoc = COVERAGE) {
  const calls: Call[] = [];
  let revision = 1;
  const overrides: Array<(call: Call) => Response | Promise<Response> | null> = [];

  const fetchImpl: FetchLike = async (url, init) => {
    const call: Call = {
      method: init?.method ?? "GET",
      url,
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    };
    calls.push(call);
    for (const override of overrides) {
      const hit = override(call);
      if (hit) return hit;
    }
    if (call.method === "PUT") {
      revision += 1;
      return jsonResponse({ schema: "seamesh-api/1", id: "s1", revision, findings: [] });
    }
    if (url.includes("/coverage")) return jsonResponse(coverage);
    if (call.method === "GET" && url.endsWith("/v1/scenarios/s1")) {
      return jsonResponse({ schema: "seamesh-api/1", id: "s1", revision, scenario: BASE_DOC });
    }
    throw new Error(`stub has no answer for ${call.method} ${url}`);
  };

  return { calls, overrides, fetchImpl, currentRevision: () => revision };
}

function makeEditor(stub: ReturnType<typeof stubService>) {
  const api = createClient("http://svc", stub.fetchImpl);
  return new ScenarioEditor(api, "s1", BASE_DOC, 1);
}

beforeEach(() => {
  vi.useFakeTimers();
});

afterEach(() => {
  vi.useRealTimers();
});

describe("debounced sync", () => {
  it("placing a node issues exactly one PUT, then one coverage GET, after the debounce", async () => {
    const stub = stubService();
    const editor = makeEditor(stub);

    const id = editor.placeNode("relay_island", 400, 300);
    expect(id).toBe("relay-1");
    expect(stub.calls).toHaveLength(0); // nothing on the wire yet

    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS - 1);
    expect(stub.calls).toHaveLength(0);

    await vi.advanceTimersByTimeAsync(1);
    await editor.flush();

    expect(stub.calls.map((c) => [c.method, c.url])).toEqual([
      ["PUT", "http://svc/v1/scenarios/s1"],
      ["GET", "http://svc/v1/scenarios/s1/coverage?resolution=25"],
    ]);
    expect(editor.coverage).toEqual(COVERAGE);
  });

  it("a burst of edits coalesces into a single PUT carrying the final document", async () => {
    const stub = stubService();
    const editor = makeEditor(stub);

    editor.placeNode("relay_island", 400, 300);
    await vi.advanceTimersByTimeAsync(200);
    editor.placeNode("buoy", 600, 500);
    await vi.advanceTimersByTimeAsync(200);
    editor.moveNode("relay-1", 450, 350);
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS);
    await editor.flush();

    const puts = stub.calls.filter((c) => c.method === "PUT");
    expect(puts).toHaveLength(1);
    const body = puts[0].body as ScenarioDoc & { revision: number };
    expect(body.nodes.map((n) => n.id)).toEqual(["bs-1", "relay-1", "buoy-1"]);
    expect(body.nodes[1].position).toEqual([450, 350]);
    expect(stub.calls.filter((c) => c.url.includes("/coverage"))).toHaveLength(1);
  });

  it("sends the server revision and adopts the bumped one", async () => {
    const stub = stubService();
    const editor = makeEditor(stub);

    editor.placeNode("relay_island", 400, 300);
    await editor.flush();
    expect((stub.calls[0].body as { revision: number }).revision).toBe(1);
    expect(editor.currentRevision).toBe(2);

    editor.moveNode("relay-1", 500, 300);
    await editor.flush();
    const secondPut = stub.calls.filter((c) => c.method === "PUT")[1];
    expect((secondPut.body as { revision: number }).revision).toBe(2);
    expect(editor.currentRevision).toBe(3);
  });
});

describe("node editing rules", () => {
  it("moors a buoy where it is dropped and re-moors it on move", () => {
    const stub = stubService();
    const editor = makeEditor(stub);
    editor.placeNode("buoy", 250, 250);
    const buoy = editor.document.nodes.find((n) => n.id === "buoy-1")!;
    expect(buoy.anchor).toEqual({ anchor_point: [250, 250], chain_radius_m: 30 });
    editor.moveNode("buoy-1", 300, 260);
    expect(buoy.position).toEqual([300, 260]);
    expect(buoy.anchor!.anchor_point).toEqual([300, 260]);
  });

  it("rejects placements and moves outside the extent, leaving the document alone", () => {
    const stub = stubService();
    const editor = makeEditor(stub);
    expect(editor.placeNode("relay_island", -5, 200)).toBeNull();
    expect(editor.placeNode("relay_island", 200, 1001)).toBeNull();
    expect(editor.document.nodes).toHaveLength(1);
    expect(editor.moveNode("bs-1", 2000, 100)).toBe(false);
    expect(editor.document.nodes[0].position).toEqual([100, 100]);
    expect(editor.dirty).toBe(false);
  });

  it("applies kind defaults on placement", () => {
    const stub = stubService();
    const editor = makeEditor(stub);
    editor.placeNode("base_station", 800, 800);
    editor.placeNode("relay_island", 700, 700);
    const bs = editor.document.nodes.find((n) => n.id === "bs-2")!;
    const relay = editor.document.nodes.find((n) => n.id === "relay-1")!;
    expect(bs.antenna_height_m).toBe(18);
    expect(bs.energy).toBeNull();
    expect(relay.antenna_height_m).toBe(3);
    expect(relay.energy).toMatchObject({ panel_max_w: 100, battery_capacity_wh: 768, load_w: 12 });
  });
});

describe("write failures", () => {
  it("rolls the document back on 422 and skips the coverage fetch", async () => {
    const stub = stubService();
    stub.overrides.push((call) =>
      call.method === "PUT"
        ? jsonResponse(
            {
              schema: "seamesh-api/1",
              code: "REJECTED_SCENARIO",
              message: "scenario failed validation",
              findings: [
                { severity: "error", code: "SEPARATION_BELOW_300M", message: "too close" },
              ],
            },
            422
          )
        : null
    );
    const editor = makeEditor(stub);

    editor.placeNode("relay_island", 120, 100);
    await editor.flush();

    expect(editor.document).toEqual(BASE_DOC);
    expect(editor.dirty).toBe(false);
    expect(editor.findings.map((f) => f.code)).toEqual(["SEPARATION_BELOW_300M"]);
    expect(stub.calls.filter((c) => c.url.includes("/coverage"))).toHaveLength(0);
  });

  it("re-reads the server document after a STALE_REVISION conflict", async () => {
    const stub = stubService();
    let conflicted = false;
    stub.overrides.push((call) => {
      if (call.method === "PUT" && !conflicted) {
        conflicted = true;
        return jsonResponse(
          { schema: "seamesh-api/1", code: "STALE_REVISION", message: "revision is stale" },
          409
        );
      }
      return null;
    });
    const editor = makeEditor(stub);

    editor.placeNode("relay_island", 400, 300);
    await editor.flush();

    expect(editor.document).toEqual(BASE_DOC); // adopted the server copy
    expect(editor.currentRevision).toBe(stub.currentRevision());
    const kinds = stub.calls.map((c) => [c.method, c.url.includes("/coverage")]);
    expect(kinds).toEqual([
      ["PUT", false],
      ["GET", false],
      ["GET", true],
    ]);
  });
});

describe("coverage superseding", () => {
  it("drops a slow stale response once a newer request has landed", async () => {
    vi.useRealTimers();
    const early: CoverageDoc = { ...COVERAGE, cells: [[1, 1, "bs-1", 1], [0, 0, null, 0]] };
    const late: CoverageDoc = { ...COVERAGE, cells: [[2, 2, "bs-1", 1], [0, 0, null, 0]] };
    const waiting: Array<(r: Response) => void> = [];
    const fetchImpl: FetchLike = () => new Promise((resolve) => waiting.push(resolve));
    const api = createClient("http://svc", fetchImpl);
    const editor = new ScenarioEditor(api, "s1", BASE_DOC, 1);

    const first = editor.refreshCoverage();
    const second = editor.refreshCoverage();
    expect(waiting).toHaveLength(2);

    waiting[1](jsonResponse(late));
    await second;
    expect(editor.coverage).toEqual(late);

    waiting[0](jsonResponse(early)); // stale response arrives after the newer one
    await first;
    expect(editor.coverage).toEqual(late);
  });
});
