import type { PlannerApi } from "./api.js";
import type { MetricsRecord, RunHandle } from "./types.js";

/**
 * Drive a simulation run and replay its metrics log.
 *
 * The service streams nothing; the client polls the run handle until it
 * settles, then pages through the log with from_t cursors. Playback itself
 * is a pure lookup over the fetched records, so scrubbing never re-asks the
 * server for anything.
 */

export function pollRun(api: PlannerApi, runId: string, intervalMs = 250): Promise<RunHandle> {
  return new Promise((resolve, reject) => {
    const tick = () => {
      api
        .getRun(runId)
        .then((handle) => {
          if (handle.status === "done") {
            resolve(handle);
          } else if (handle.status === "failed") {
            reject(new Error(handle.error ?? "simulation failed"));
          } else {
            setTimeout(tick, intervalMs);
          }
        })
        .catch(reject);
    };
    tick();
  });
}

/** Page through the whole metrics log and return the records in order. */
export async function fetchRunMetrics(
  api: PlannerApi,
  runId: string,
  pageLimit = 500
): Promise<MetricsRecord[]> {
  const records: MetricsRecord[] = [];
  let fromT = 0;
  for (;;) {
    const page = await api.getMetricsPage(runId, fromT, pageLimit);
    records.push(...page.records);
    if (page.next_from_t === null) return records;
    fromT = page.next_from_t;
  }
}

export class Playback {
  constructor(private readonly records: MetricsRecord[]) {
    for (let i = 1; i < records.length; i++) {
      if (records[i].t <= records[i - 1].t) {
        throw new Error("metrics records must be strictly increasing in t");
      }
    }
  }

  get empty(): boolean {
    return this.records.length === 0;
  }

  get startT(): number {
    return this.empty ? 0 : this.records[0].t;
  }

  get endT(): number {
    return this.empty ? 0 : this.records[this.records.length - 1].t;
  }

  get durationS(): number {
    return this.endT - this.startT;
  }

  /** Latest record with record.t <= t, or null before the log starts. */
  frameAt(t: number): MetricsRecord | null {
    if (this.empty || t < this.records[0].t) return null;
    let lo = 0;
    let hi = this.records.length - 1;
    while (lo < hi) {
      const mid = (lo + hi + 1) >> 1;
      if (this.records[mid].t <= t) lo = mid;
      else hi = mid - 1;
    }
    return this.records[lo];
  }

  /** All node_off / node_on / link_lost events in (prevT, t]. */
  eventsBetween(prevT: number, t: number): MetricsRecord["events"] {
    const out: MetricsRecord["events"] = [];
    for (const rec of this.records) {
      if (rec.t > prevT && rec.t <= t) out.push(...rec.events);
      if (rec.t > t) break;
    }
    return out;
  }
}
