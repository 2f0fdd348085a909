import { describe, expect, it } from "vitest";
import { createClient, type FetchLike } from "../src/api.js";
import { fetchRunMetrics, Playback, pollRun } from "../src/playback.js";
import type { MetricsRecord, RunHandle } from "../src/types.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function record(t: number): MetricsRecord {
  return {
    t,
    nodes: { "bs-1": { x: 0, y: 0, charge_wh: null, operational: true } },
    terminals: {},
    events: [],
  };
}

/** Serves /metrics pages of `limit` records from a fixed log. */
function pagedMetricsService(log: MetricsRecord[]): FetchLike {
  return async (url) => {
    const u = new URL(url);
    const fromT = Number(u.searchParams.get("from_t"));
    const limit = Number(u.searchParams.get("limit"));
    const tail = log.filter((r) => r.t >= fromT);
    const page = tail.slice(0, limit);
    const next = tail.length > limit ? tail[limit].t : null;
    return jsonResponse({
      schema: "seamesh-metrics-page/1",
      header: { schema: "seamesh-metrics/1" },
      records: page,
      next_from_t: next,
    });
  };
}

describe("fetchRunMetrics", () => {
  it("follows next_from_t cursors and reassembles the whole log in order", async () => {
    const log = Array.from({ length: 26 }, (_, i) => record(i * 60));
    const api = createClient("http://svc", pagedMetricsService(log));
    const records = await fetchRunMetrics(api, "run-1", 7);
    expect(records.map((r) => r.t)).toEqual(log.map((r) => r.t)); // gap-free, overlap-free
  });

  it("handles a log that fits in one page", async () => {
    const log = [record(0), record(60)];
    const api = createClient("http://svc", pagedMetricsService(log));
    expect(await fetchRunMetrics(api, "run-1", 500)).toEqual(log);
  });
});

describe("pollRun", () => {
  function runService(statuses: Array<RunHandle["status"]>, error: string | null = null): FetchLike {
    let i = 0;
    return async () => {
      const status = statuses[Math.min(i++, statuses.length - 1)];
      return jsonResponse({ schema: "seamesh-run/1", id: "run-1", status, progress: 0.5, error });
    };
  }

  it("polls until the run is done", async () => {
    const api = createClient("http://svc", runService(["pending", "running", "running", "done"]));
    const handle = await pollRun(api, "run-1", 1);
    expect(handle.status).toBe("done");
  });

  it("rejects with the server's error when the run fails", async () => {
    const api = createClient("http://svc", runService(["running", "failed"], "battery model blew up"));
    await expect(pollRun(api, "run-1", 1)).rejects.toThrow("battery model blew up");
  });
});

describe("Playback", () => {
  const log = [record(0), record(60), record(120), record(180)];

  it("rejects out-of-order logs", () => {
    expect(() => new Playback([record(60), record(60)])).toThrow(/strictly increasing/);
    expect(() => new Playback(log)).not.toThrow();
  });

  it("frameAt returns the latest record at or before t", () => {
    const pb = new Playback(log);
    expect(pb.frameAt(-1)).toBeNull();
    expect(pb.frameAt(0)!.t).toBe(0);
    expect(pb.frameAt(59.9)!.t).toBe(0);
    expect(pb.frameAt(60)!.t).toBe(60);
    expect(pb.frameAt(179)!.t).toBe(120);
    expect(pb.frameAt(100000)!.t).toBe(180);
    expect(pb.startT).toBe(0);
    expect(pb.endT).toBe(180);
    expect(pb.durationS).toBe(180);
  });

  it("replays deterministically: same log, same frames", () => {
    const a = new Playback(log);
    const b = new Playback(log.map((r) => ({ ...r })));
    for (let t = -10; t <= 200; t += 7) {
      expect(b.frameAt(t)?.t).toBe(a.frameAt(t)?.t);
    }
  });

  it("collects events inside a scrub step", () => {
    const withEvents: MetricsRecord[] = [
      { ...record(0) },
      { ...record(60), events: [{ event: "node_off", node: "relay-1" }] },
      { ...record(120), events: [{ event: "link_lost", a: "bs-1", b: "relay-1" }] },
    ];
    const pb = new Playback(withEvents);
    expect(pb.eventsBetween(0, 60)).toEqual([{ event: "node_off", node: "relay-1" }]);
    expect(pb.eventsBetween(0, 120)).toHaveLength(2);
    expect(pb.eventsBetween(60, 60)).toEqual([]);
  });

  it("is safe on an empty log", () => {
    const pb = new Playback([]);
    expect(pb.empty).toBe(true);
    expect(pb.frameAt(0)).toBeNull();
    expect(pb.durationS).toBe(0);
  });
});
