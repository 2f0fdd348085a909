import { ApiError, type PlannerApi } from "./api.js";
import type { CoverageDoc, Finding, NodeDoc, NodeKind, RadioDoc, ScenarioDoc } from "./types.js";

/**
 * Owns the working copy of a scenario and keeps the server in sync.
 *
 * Edits are optimistic: the local document changes immediately, then a
 * debounced PUT pushes it (one PUT per burst of edits, serialized, with the
 * revision field for optimistic locking) followed by one coverage fetch.
 * A rejected write (422) rolls the working copy back to the last accepted
 * state. Coverage responses carry a sequence number so a stale response can
 * never overwrite a newer one.
 */

export const DEBOUNCE_MS = 500;
export const DEFAULT_CHAIN_RADIUS_M = 30;

const KIND_HEIGHT_M: Record<NodeKind, number> = {
  base_station: 18,
  relay_island: 3,
  buoy: 1.5,
  terminal: 1.5,
};

const DEFAULT_NODE_RADIO: RadioDoc = {
  band: "5GHz",
  center_frequency_hz: 5.5e9,
  channel_width_mhz: 160,
  tx_power_dbm: 27,
  antenna_gain_dbi: 8,
  spatial_streams: 2,
};

const DEFAULT_SOLAR = {
  panel_max_w: 100,
  battery_capacity_wh: 768,
  load_w: 12,
  duty_cycle: 1,
};

export interface EditorEvents {
  onCoverage?: (doc: CoverageDoc | null) => void;
  onFindings?: (findings: Finding[]) => void;
  onSyncError?: (err: Error) => void;
}

function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export class ScenarioEditor {
  private doc: ScenarioDoc;
  private synced: ScenarioDoc;
  private revision: number;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private syncChain: Promise<void> = Promise.resolve();
  private coverageSeq = 0;

  coverage: CoverageDoc | null = null;
  findings: Finding[] = [];
  resolutionM = 25;

  constructor(
    private readonly api: PlannerApi,
    readonly scenarioId: string,
    doc: ScenarioDoc,
    revision: number,
    private readonly events: EditorEvents = {},
    private readonly debounceMs: number = DEBOUNCE_MS
  ) {
    this.doc = clone(doc);
    this.synced = clone(doc);
    this.revision = revision;
  }

  /** Fetch the scenario and its initial coverage, then hand over an editor. */
  static async load(api: PlannerApi, id: string, events: EditorEvents = {}): Promise<ScenarioEditor> {
    const env = await api.getScenario(id);
    const editor = new ScenarioEditor(api, id, env.scenario, env.revision, events);
    await editor.refreshCoverage();
    return editor;
  }

  get document(): ScenarioDoc {
    return this.doc;
  }

  get currentRevision(): number {
    return this.revision;
  }

  get dirty(): boolean {
    return JSON.stringify(this.doc) !== JSON.stringify(this.synced);
  }

  private withinExtent(x: number, y: number): boolean {
    const e = this.doc.extent;
    if (!e) return true;
    return x >= e[0] && x <= e[2] && y >= e[1] && y <= e[3];
  }

  private freshId(kind: NodeKind): string {
    const prefix = { base_station: "bs", relay_island: "relay", buoy: "buoy", terminal: "term" }[kind];
    let n = 1;
    while (this.doc.nodes.some((node) => node.id === `${prefix}-${n}`)) n++;
    return `${prefix}-${n}`;
  }

  /**
   * Add a node with kind defaults at a map position. Buoys are moored where
   * they are dropped. Returns the new id, or null if the spot is off-map.
   */
  placeNode(kind: NodeKind, x: number, y: number): string | null {
    if (!this.withinExtent(x, y)) return null;
    const node: NodeDoc = {
      id: this.freshId(kind),
      kind,
      position: [x, y],
      antenna_height_m: KIND_HEIGHT_M[kind],
      gateway: false,
      power_stations: 0,
      radio: clone(DEFAULT_NODE_RADIO),
      energy: kind === "relay_island" || kind === "buoy" ? { ...DEFAULT_SOLAR } : null,
      anchor:
        kind === "buoy"
          ? { anchor_point: [x, y], chain_radius_m: DEFAULT_CHAIN_RADIUS_M }
          : null,
    };
    this.doc.nodes.push(node);
    this.scheduleSync();
    return node.id;
  }

  /** Move a node; buoys re-moor to the new spot. False if off-map/unknown. */
  moveNode(id: string, x: number, y: number): boolean {
    const node = this.doc.nodes.find((n) => n.id === id);
    if (!node || !this.withinExtent(x, y)) return false;
    node.position = [x, y];
    if (node.anchor) node.anchor.anchor_point = [x, y];
    this.scheduleSync();
    return true;
  }

  removeNode(id: string): boolean {
    const before = this.doc.nodes.length;
    this.doc.nodes = this.doc.nodes.filter((n) => n.id !== id);
    if (this.doc.nodes.length === before) return false;
    this.scheduleSync();
    return true;
  }

  private scheduleSync(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.flush();
    }, this.debounceMs);
  }

  /** Push pending edits now (also called by the debounce timer). */
  flush(): Promise<void> {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.syncChain = this.syncChain.then(() => this.sync());
    return this.syncChain;
  }

  private async sync(): Promise<void> {
    if (!this.dirty) return;
    const snapshot = clone(this.doc);
    try {
      const res = await this.api.putScenario(this.scenarioId, snapshot, this.revision);
      this.revision = res.revision;
      this.synced = snapshot;
      this.findings = res.findings;
      this.events.onFindings?.(res.findings);
      await this.refreshCoverage();
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        // server refused the document: undo to the last accepted state
        this.doc = clone(this.synced);
        this.findings = err.findings;
        this.events.onFindings?.(err.findings);
        return;
      }
      if (err instanceof ApiError && err.status === 409 && err.code === "STALE_REVISION") {
        // lost an optimistic-lock race: adopt whatever the server has now
        const env = await this.api.getScenario(this.scenarioId);
        this.doc = clone(env.scenario);
        this.synced = clone(env.scenario);
        this.revision = env.revision;
        await this.refreshCoverage();
        return;
      }
      this.events.onSyncError?.(err as Error);
    }
  }

  /**
   * Fetch coverage for the current scenario. Only the newest request may
   * land: older in-flight responses are dropped.
   */
  async refreshCoverage(): Promise<void> {
    const seq = ++this.coverageSeq;
    let doc: CoverageDoc | null;
    try {
      doc = await this.api.getCoverage(this.scenarioId, this.resolutionM);
    } catch (err) {
      if (seq !== this.coverageSeq) return;
      this.coverage = null;
      this.events.onCoverage?.(null);
      if (!(err instanceof ApiError)) throw err;
      this.events.onSyncError?.(err);
      return;
    }
    if (seq !== this.coverageSeq) return;
    this.coverage = doc;
    this.events.onCoverage?.(doc);
  }
}
