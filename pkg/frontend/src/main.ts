import { ApiError, createClient, type PlannerApi } from "./api.js";
import { ScenarioEditor } from "./editor.js";
import { legend, tooltipText } from "./heatmap.js";
import { fetchRunMetrics, Playback, pollRun } from "./playback.js";
import { drawScene } from "./render.js";
import { makeViewState, toMap, zoomBy, type CanvasViewState } from "./view.js";
import type { MetricsRecord, NodeKind, ScenarioDoc } from "./types.js";

/** Browser entry point: wires the editor, canvas, and playback controls. */

const SERVICE_URL = new URLSearchParams(location.search).get("service") ?? "http://localhost:8000";

const STARTER: ScenarioDoc = {
  name: "untitled-deployment",
  origin: { lat: 22.305, lon: 39.104 },
  extent: [0, 0, 3000, 2000],
  nodes: [
    {
      id: "bs-1",
      kind: "base_station",
      position: [200, 1000],
      antenna_height_m: 18,
      gateway: true,
      power_stations: 1,
      radio: {
        band: "5GHz",
        center_frequency_hz: 5.5e9,
        channel_width_mhz: 160,
        tx_power_dbm: 27,
        antenna_gain_dbi: 8,
        spatial_streams: 2,
      },
    },
  ],
  prices: { router: 7879, power_station: 11006, solar_panel: 4202, misc: 1400 },
};

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function setStatus(text: string): void {
  byId<HTMLSpanElement>("status").textContent = text;
}

function renderLegend(): void {
  const box = byId<HTMLDivElement>("legend");
  box.replaceChildren();
  for (const entry of legend()) {
    const row = document.createElement("div");
    row.className = "legend-row";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = entry.color;
    row.append(swatch, document.createTextNode(entry.label));
    box.append(row);
  }
}

function renderFindings(findings: { severity: string; code: string; message: string }[]): void {
  const list = byId<HTMLUListElement>("findings");
  list.replaceChildren();
  for (const f of findings) {
    const li = document.createElement("li");
    li.className = f.severity;
    li.textContent = `${f.code}: ${f.message}`;
    list.append(li);
  }
  if (findings.length === 0) {
    const li = document.createElement("li");
    li.className = "ok";
    li.textContent = "scenario valid";
    list.append(li);
  }
}

async function renderCost(api: PlannerApi, scenarioId: string): Promise<void> {
  const box = byId<HTMLDivElement>("cost");
  try {
    const doc = await api.getCost(scenarioId);
    const lines = doc.items.map(
      (it) => `${it.label} x${it.count} @ ${(it.unit_cents / 100).toFixed(2)} = ${(it.subtotal_cents / 100).toFixed(2)}`
    );
    lines.push(`total $${doc.total_usd}`);
    box.textContent = lines.join("\n");
  } catch (err) {
    box.textContent = err instanceof ApiError ? `cost unavailable: ${err.code}` : String(err);
  }
}

async function openScenario(api: PlannerApi): Promise<string> {
  const fromHash = location.hash.replace(/^#/, "");
  if (fromHash) return fromHash;
  const created = await api.createScenario(STARTER);
  location.hash = created.id;
  return created.id;
}

async function boot(): Promise<void> {
  const api = createClient(SERVICE_URL);
  const canvas = byId<HTMLCanvasElement>("map");
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");
  const tooltip = byId<HTMLDivElement>("tooltip");
  const toolPicker = byId<HTMLSelectElement>("tool");
  const scrub = byId<HTMLInputElement>("scrub");
  const clock = byId<HTMLSpanElement>("clock");

  let view: CanvasViewState = makeViewState({ panX: -100, panY: -100 });
  let playback: Playback | null = null;
  let frame: MetricsRecord | null = null;

  const scenarioId = await openScenario(api);
  const editor = await ScenarioEditor.load(api, scenarioId, {
    onCoverage: () => repaint(),
    onFindings: (findings) => {
      renderFindings(findings);
      void renderCost(api, scenarioId);
    },
    onSyncError: (err) => setStatus(err.message),
  });

  function repaint(): void {
    drawScene(ctx!, view, canvas.width, canvas.height, editor.document, editor.coverage, frame);
  }

  function fitCanvas(): void {
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    repaint();
  }
  window.addEventListener("resize", fitCanvas);

  let dragging: string | null = null;
  canvas.addEventListener("pointerdown", (ev) => {
    const p = toMap(view, ev.offsetX, ev.offsetY, canvas.height);
    const tool = toolPicker.value;
    if (tool === "select") {
      const hitRadius = 12 / view.zoom;
      const hit = editor.document.nodes.find(
        (n) => Math.hypot(n.position[0] - p.x, n.position[1] - p.y) <= hitRadius
      );
      view = { ...view, selectedNodeId: hit ? hit.id : null };
      dragging = hit ? hit.id : null;
    } else {
      const id = editor.placeNode(tool as NodeKind, p.x, p.y);
      setStatus(id ? `placed ${id}` : "outside the deployment extent");
      if (id) view = { ...view, selectedNodeId: id };
    }
    repaint();
  });
  canvas.addEventListener("pointermove", (ev) => {
    const p = toMap(view, ev.offsetX, ev.offsetY, canvas.height);
    if (dragging) {
      if (!editor.moveNode(dragging, p.x, p.y)) setStatus("outside the deployment extent");
      repaint();
      return;
    }
    const cov = editor.coverage;
    if (!cov) {
      tooltip.hidden = true;
      return;
    }
    const ix = Math.floor((p.x - cov.bbox[0]) / cov.resolution_m);
    const iy = Math.floor((p.y - cov.bbox[1]) / cov.resolution_m);
    if (ix < 0 || iy < 0 || ix >= cov.nx || iy >= cov.ny) {
      tooltip.hidden = true;
      return;
    }
    const [down, up, serving, hops] = cov.cells[iy * cov.nx + ix];
    tooltip.hidden = false;
    tooltip.style.left = `${ev.offsetX + 14}px`;
    tooltip.style.top = `${ev.offsetY + 14}px`;
    tooltip.textContent = tooltipText({ downlinkMbps: down, uplinkMbps: up, servingNode: serving, hops });
  });
  canvas.addEventListener("pointerup", () => {
    dragging = null;
  });
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    view = zoomBy(view, ev.deltaY < 0 ? 1.2 : 1 / 1.2);
    repaint();
  });
  window.addEventListener("keydown", (ev) => {
    if (ev.key === "Delete" && view.selectedNodeId) {
      editor.removeNode(view.selectedNodeId);
      view = { ...view, selectedNodeId: null };
      repaint();
    }
  });

  byId<HTMLButtonElement>("simulate").addEventListener("click", async () => {
    try {
      setStatus("simulating…");
      await editor.flush();
      const handle = await api.startRun(scenarioId, { duration_s: 3600, dt_s: 60 });
      await pollRun(api, handle.id);
      const records = await fetchRunMetrics(api, handle.id);
      playback = new Playback(records);
      scrub.min = String(playback.startT);
      scrub.max = String(playback.endT);
      scrub.value = scrub.min;
      scrub.disabled = playback.empty;
      frame = playback.frameAt(playback.startT);
      setStatus(`run done: ${records.length} records`);
      repaint();
    } catch (err) {
      setStatus(`simulation failed: ${err instanceof Error ? err.message : String(err)}`);
    }
  });

  scrub.addEventListener("input", () => {
    if (!playback) return;
    const t = Number(scrub.value);
    frame = playback.frameAt(t);
    clock.textContent = `t = ${t.toFixed(0)} s`;
    repaint();
  });

  renderLegend();
  renderFindings(editor.findings);
  void renderCost(api, scenarioId);
  setStatus(`editing ${scenarioId} via ${SERVICE_URL}`);
  fitCanvas();
}

boot().catch((err) => setStatus(err instanceof Error ? err.message : String(err)));
