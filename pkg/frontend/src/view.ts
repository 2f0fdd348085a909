import { assertThresholds, DEFAULT_THRESHOLDS_MBPS } from "./heatmap.js";

export type Overlay = "coverage" | "links" | "energy";

/** Camera + UI selection state for the map canvas. */
export interface CanvasViewState {
  panX: number;
  panY: number;
  /** Pixels per meter; must stay positive. */
  zoom: number;
  selectedNodeId: string | null;
  overlay: Overlay;
  legendThresholdsMbps: number[];
}

export function makeViewState(partial: Partial<CanvasViewState> = {}): CanvasViewState {
  const state: CanvasViewState = {
    panX: 0,
    panY: 0,
    zoom: 0.5,
    selectedNodeId: null,
    overlay: "coverage",
    legendThresholdsMbps: [...DEFAULT_THRESHOLDS_MBPS],
    ...partial,
  };
  if (!(state.zoom > 0)) throw new Error("zoom must be positive");
  assertThresholds(state.legendThresholdsMbps);
  return state;
}

/** Map meters -> canvas pixels (y axis flipped: north up). */
export function toScreen(v: CanvasViewState, xM: number, yM: number, heightPx: number) {
  return {
    x: (xM - v.panX) * v.zoom,
    y: heightPx - (yM - v.panY) * v.zoom,
  };
}

/** Canvas pixels -> map meters. */
export function toMap(v: CanvasViewState, xPx: number, yPx: number, heightPx: number) {
  return {
    x: xPx / v.zoom + v.panX,
    y: (heightPx - yPx) / v.zoom + v.panY,
  };
}

export function zoomBy(v: CanvasViewState, factor: number): CanvasViewState {
  const zoom = v.zoom * factor;
  if (!(zoom > 0)) throw new Error("zoom must be positive");
  return { ...v, zoom };
}
