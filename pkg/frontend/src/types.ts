/** Wire types for the /v1 planning service. Shapes mirror docs/schemas.md. */

export type NodeKind = "base_station" | "relay_island" | "buoy" | "terminal";

export interface RadioDoc {
  band: string;
  center_frequency_hz: number;
  channel_width_mhz: number;
  tx_power_dbm: number;
  antenna_gain_dbi?: number;
  spatial_streams?: number;
  guard_interval_us?: number;
  noise_figure_db?: number;
  max_mcs?: number;
}

export interface EnergyDoc {
  panel_max_w: number;
  battery_capacity_wh: number;
  load_w: number;
  duty_cycle?: number;
  off_threshold_wh?: number;
  on_threshold_wh?: number | null;
}

export interface AnchorDoc {
  anchor_point: [number, number];
  chain_radius_m: number;
  drift_sigma?: number;
  current_mps?: [number, number];
}

export interface NodeDoc {
  id: string;
  kind: NodeKind;
  position: [number, number];
  antenna_height_m?: number;
  gateway?: boolean;
  power_stations?: number;
  radio: RadioDoc;
  energy?: EnergyDoc | null;
  anchor?: AnchorDoc | null;
}

export interface ScenarioDoc {
  name: string;
  origin: { lat: number; lon: number };
  nodes: NodeDoc[];
  environment?: Record<string, number>;
  prices?: Record<string, number | null>;
  sim_params?: Record<string, number>;
  extent?: [number, number, number, number] | null;
  terminal?: { height_m?: number; radio?: RadioDoc };
}

export interface Finding {
  severity: "error" | "warning";
  code: string;
  message: string;
}

/** Cell tuple in a coverage document: [down Mbps, up Mbps, serving id, hops]. */
export type CoverageCell = [number, number, string | null, number];

export interface CoverageDoc {
  schema: string;
  bbox: [number, number, number, number];
  resolution_m: number;
  nx: number;
  ny: number;
  cells: CoverageCell[];
}

export interface ScenarioEnvelope {
  schema: string;
  id: string;
  revision: number;
  scenario: ScenarioDoc;
}

export interface WriteResult {
  schema: string;
  id: string;
  revision: number;
  findings: Finding[];
}

export interface CostItemDoc {
  label: string;
  count: number;
  unit_cents: number;
  subtotal_cents: number;
}

export interface CostDoc {
  schema: string;
  items: CostItemDoc[];
  total_cents: number;
  total_usd: string;
}

export interface RunHandle {
  schema: string;
  id: string;
  status: "pending" | "running" | "done" | "failed";
  progress: number;
  error: string | null;
}

export interface NodeMetrics {
  x: number;
  y: number;
  charge_wh: number | null;
  operational: boolean;
}

export interface TerminalMetrics {
  serving: string | null;
  downlink_mbps: number;
  uplink_mbps: number;
  hops: number;
}

export interface MetricsRecord {
  t: number;
  nodes: Record<string, NodeMetrics>;
  terminals: Record<string, TerminalMetrics>;
  events: Array<Record<string, string>>;
}

export interface MetricsPage {
  schema: string;
  header: Record<string, unknown> | null;
  records: MetricsRecord[];
  next_from_t: number | null;
}
