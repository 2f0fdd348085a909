import type { CoverageCell, CoverageDoc } from "./types.js";

/**
 * Pure mapping from a coverage document to drawable cells. Every number a
 * cell shows comes verbatim from the document — no client-side radio math.
 */

export interface CellView {
  ix: number;
  iy: number;
  /** Cell rectangle in map meters (ENU). */
  x0: number;
  y0: number;
  sizeM: number;
  color: string;
  covered: boolean;
  tooltip: CellTooltip;
}

export interface CellTooltip {
  downlinkMbps: number;
  uplinkMbps: number;
  servingNode: string | null;
  hops: number;
}

export interface LegendEntry {
  label: string;
  color: string;
}

/** Downlink-Mbps bucket edges; strictly increasing. */
export const DEFAULT_THRESHOLDS_MBPS = [2, 15, 60, 150, 300];

export const UNCOVERED_COLOR = "rgba(40, 44, 52, 0.88)";

// cold-to-hot ramp, one color per bucket (thresholds.length + 1 buckets)
const BUCKET_HUES = [215, 195, 160, 95, 55, 25];

export function assertThresholds(thresholds: number[]): void {
  if (thresholds.length === 0) throw new Error("legend needs at least one threshold");
  for (let i = 1; i < thresholds.length; i++) {
    if (!(thresholds[i] > thresholds[i - 1])) {
      throw new Error(`legend thresholds must be strictly increasing at index ${i}`);
    }
  }
}

function bucketIndex(downMbps: number, thresholds: number[]): number {
  let i = 0;
  while (i < thresholds.length && downMbps >= thresholds[i]) i++;
  return i;
}

function bucketColor(bucket: number, bucketCount: number): string {
  const hue = BUCKET_HUES[Math.min(bucket, BUCKET_HUES.length - 1)];
  const light = 36 + Math.round((bucket / Math.max(bucketCount - 1, 1)) * 18);
  return `hsl(${hue}, 85%, ${light}%)`;
}

/** Color for one coverage cell; uncovered cells get a distinct flat tone. */
export function cellColor(
  cell: CoverageCell,
  thresholds: number[] = DEFAULT_THRESHOLDS_MBPS
): string {
  assertThresholds(thresholds);
  const [down, , serving] = cell;
  if (serving === null) return UNCOVERED_COLOR;
  return bucketColor(bucketIndex(down, thresholds), thresholds.length + 1);
}

/** Legend entries matching cellColor's buckets, lowest rate first. */
export function legend(thresholds: number[] = DEFAULT_THRESHOLDS_MBPS): LegendEntry[] {
  assertThresholds(thresholds);
  const entries: LegendEntry[] = [
    { label: "no service", color: UNCOVERED_COLOR },
    { label: `< ${thresholds[0]} Mbps`, color: bucketColor(0, thresholds.length + 1) },
  ];
  for (let i = 1; i < thresholds.length; i++) {
    entries.push({
      label: `${thresholds[i - 1]}–${thresholds[i]} Mbps`,
      color: bucketColor(i, thresholds.length + 1),
    });
  }
  entries.push({
    label: `≥ ${thresholds[thresholds.length - 1]} Mbps`,
    color: bucketColor(thresholds.length, thresholds.length + 1),
  });
  return entries;
}

/**
 * Expand a coverage document into positioned, colored, tooltip-carrying
 * cells. Tooltip fields repeat the document values unchanged.
 */
export function buildCellViews(
  doc: CoverageDoc,
  thresholds: number[] = DEFAULT_THRESHOLDS_MBPS
): CellView[] {
  assertThresholds(thresholds);
  const [x0, y0] = doc.bbox;
  const out: CellView[] = [];
  for (let iy = 0; iy < doc.ny; iy++) {
    for (let ix = 0; ix < doc.nx; ix++) {
      const cell = doc.cells[iy * doc.nx + ix];
      const [down, up, serving, hops] = cell;
      out.push({
        ix,
        iy,
        x0: x0 + ix * doc.resolution_m,
        y0: y0 + iy * doc.resolution_m,
        sizeM: doc.resolution_m,
        color: cellColor(cell, thresholds),
        covered: serving !== null,
        tooltip: { downlinkMbps: down, uplinkMbps: up, servingNode: serving, hops },
      });
    }
  }
  return out;
}

/** One-line tooltip text, straight from the document fields. */
export function tooltipText(t: CellTooltip): string {
  if (t.servingNode === null) return "no service";
  return `${t.downlinkMbps} / ${t.uplinkMbps} Mbps via ${t.servingNode}, ${t.hops} hop${t.hops === 1 ? "" : "s"}`;
}
