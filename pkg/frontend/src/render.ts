import { buildCellViews, UNCOVERED_COLOR } from "./heatmap.js";
import { toScreen, type CanvasViewState } from "./view.js";
import type { CoverageDoc, MetricsRecord, ScenarioDoc } from "./types.js";

/**
 * Canvas drawing. Everything here is presentation: the numbers being drawn
 * come verbatim from service documents, never from local computation.
 */

const KIND_FILL: Record<string, string> = {
  base_station: "#e8b339",
  relay_island: "#4cb782",
  buoy: "#5b9bd5",
  terminal: "#c678dd",
};

const KIND_RADIUS_PX: Record<string, number> = {
  base_station: 9,
  relay_island: 7,
  buoy: 6,
  terminal: 5,
};

export function drawCoverage(
  ctx: CanvasRenderingContext2D,
  view: CanvasViewState,
  heightPx: number,
  doc: CoverageDoc
): void {
  for (const cell of buildCellViews(doc)) {
    const { x: sx, y: sy } = toScreen(view, cell.x0, cell.y0 + cell.sizeM, heightPx);
    const side = cell.sizeM * view.zoom;
    ctx.fillStyle = cell.color;
    ctx.fillRect(sx, sy, side + 0.5, side + 0.5);
  }
}

export function drawExtent(
  ctx: CanvasRenderingContext2D,
  view: CanvasViewState,
  heightPx: number,
  extent: [number, number, number, number]
): void {
  const { x: x0, y: y0 } = toScreen(view, extent[0], extent[3], heightPx);
  const { x: x1, y: y1 } = toScreen(view, extent[2], extent[1], heightPx);
  ctx.strokeStyle = "#aab2bf";
  ctx.setLineDash([6, 4]);
  ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
  ctx.setLineDash([]);
}

export function drawNodes(
  ctx: CanvasRenderingContext2D,
  view: CanvasViewState,
  heightPx: number,
  scenario: ScenarioDoc,
  frame: MetricsRecord | null
): void {
  for (const node of scenario.nodes) {
    // live position wins once a simulation frame is loaded
    const live = frame?.nodes[node.id];
    const [xM, yM] = live ? [live.x, live.y] : node.position;
    const { x: sx, y: sy } = toScreen(view, xM, yM, heightPx);
    if (node.anchor) {
      const chainPx = node.anchor.chain_radius_m * view.zoom;
      const { x: ax, y: ay } = toScreen(view, node.anchor.anchor_point[0], node.anchor.anchor_point[1], heightPx);
      ctx.strokeStyle = "rgba(91, 155, 213, 0.5)";
      ctx.beginPath();
      ctx.arc(ax, ay, chainPx, 0, Math.PI * 2);
      ctx.stroke();
    }
    const off = live ? !live.operational : false;
    ctx.fillStyle = off ? UNCOVERED_COLOR : KIND_FILL[node.kind] ?? "#ffffff";
    ctx.strokeStyle = node.id === view.selectedNodeId ? "#ffffff" : "#1c1f26";
    ctx.lineWidth = node.id === view.selectedNodeId ? 2.5 : 1;
    ctx.beginPath();
    ctx.arc(sx, sy, KIND_RADIUS_PX[node.kind] ?? 6, 0, Math.PI * 2);
    ctx.fill();
    ctx.stroke();
    if (node.gateway) {
      ctx.strokeStyle = "#e8b339";
      ctx.beginPath();
      ctx.arc(sx, sy, (KIND_RADIUS_PX[node.kind] ?? 6) + 3.5, 0, Math.PI * 2);
      ctx.stroke();
    }
    ctx.fillStyle = "#d7dae0";
    ctx.font = "11px system-ui, sans-serif";
    ctx.fillText(node.id, sx + 10, sy - 8);
  }
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  view: CanvasViewState,
  widthPx: number,
  heightPx: number,
  scenario: ScenarioDoc,
  coverage: CoverageDoc | null,
  frame: MetricsRecord | null
): void {
  ctx.fillStyle = "#10141b";
  ctx.fillRect(0, 0, widthPx, heightPx);
  if (coverage && view.overlay === "coverage") drawCoverage(ctx, view, heightPx, coverage);
  if (scenario.extent) drawExtent(ctx, view, heightPx, scenario.extent);
  drawNodes(ctx, view, heightPx, scenario, frame);
}
