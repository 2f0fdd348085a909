"""Fixed-timestep simulation: buoy drift, solar/battery state, topology
rebuilds, terminal association, and a line-delimited metrics log.

The loop is deterministic for a given (scenario, terminals, seed): per-node
RNG substreams keyed by node id decouple the random sequences from node
ordering, and records serialize with fixed key order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator

from .dynamics import (
    BuoyState,
    EnergyState,
    initial_energy_state,
    solar_factor,
    step_buoy,
    step_energy,
    substream_rng,
)
from .errors import SeameshError
from .geo import EnuPoint, GeoPoint
from .mesh import Route, access_reach_m, associate_terminal, best_route, build_link_graph
from .model import (
    AnchorSpec,
    EnergyProfile,
    Environment,
    NodeKind,
    NodeSpec,
    PriceList,
    RadioConfig,
    Scenario,
    SimParams,
    has_errors,
    validate_scenario,
)

METRICS_SCHEMA = "seamesh-metrics/1"


@dataclass(frozen=True)
class TerminalTrack:
    """Waypoint trajectory at constant speed; holds position after the last
    waypoint (a drifting vessel that stopped)."""

    id: str
    waypoints: tuple[EnuPoint, ...]
    speed_mps: float = 5.0

    def __post_init__(self):
        if not self.waypoints:
            raise ValueError("terminal track needs at least one waypoint")
        if self.speed_mps < 0:
            raise ValueError("speed_mps must be >= 0")

    def position_at(self, t_s: float) -> EnuPoint:
        travel = self.speed_mps * t_s
        for i in range(len(self.waypoints) - 1):
            a, b = self.waypoints[i], self.waypoints[i + 1]
            seg = math.hypot(b.x - a.x, b.y - a.y)
            if travel <= seg:
                if seg == 0.0:
                    return a
                f = travel / seg
                return EnuPoint(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y))
            travel -= seg
        return self.waypoints[-1]


def terminal_track_from_dict(d: dict) -> TerminalTrack:
    return TerminalTrack(
        id=str(d["id"]),
        waypoints=tuple(EnuPoint(float(p[0]), float(p[1])) for p in d["waypoints"]),
        speed_mps=float(d.get("speed_mps", 5.0)),
    )


@dataclass
class MetricsRecord:
    t_s: float
    nodes: dict[str, dict]
    terminals: dict[str, dict]
    events: list[dict] = field(default_factory=list)


def record_to_dict(rec: MetricsRecord) -> dict:
    return {"t": rec.t_s, "nodes": rec.nodes, "terminals": rec.terminals, "events": rec.events}


def metrics_header(s: Scenario) -> dict:
    return {
        "schema": METRICS_SCHEMA,
        "scenario": s.name,
        "seed": s.sim_params.seed,
        "dt_s": s.sim_params.dt_s,
        "duration_s": s.sim_params.duration_s,
    }


def _record_line(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def run_simulation(s: Scenario, terminals: tuple[TerminalTrack, ...] = ()) -> Iterator[MetricsRecord]:
    """Yield one MetricsRecord per tick, t = 0 .. duration in dt steps."""
    findings = validate_scenario(s)
    if has_errors(findings):
        codes = ", ".join(f.code for f in findings if f.severity == "error")
        raise SeameshError("REJECTED_SCENARIO", f"scenario has validation errors: {codes}")

    p = s.sim_params
    dt = p.dt_s
    n_steps = int(p.duration_s / dt)
    infra = s.infrastructure()

    buoys: dict[str, BuoyState] = {}
    rngs = {}
    for n in infra:
        if n.kind == NodeKind.BUOY and n.anchor is not None:
            buoys[n.id] = BuoyState(n.position, n.anchor)
            rngs[n.id] = substream_rng(p.seed, n.id)

    energies: dict[str, EnergyState] = {}
    for n in infra:
        if n.energy is not None:
            energies[n.id] = initial_energy_state(n.energy)

    def operational_map() -> dict[str, bool]:
        return {n.id: (energies[n.id].operational if n.id in energies else True) for n in infra}

    def position_map() -> dict[str, EnuPoint]:
        return {n.id: (buoys[n.id].position if n.id in buoys else n.position) for n in infra}

    operational = operational_map()
    positions = position_map()
    graph = build_link_graph(s, operational, positions)
    routes: dict[str, Route | None] = {v: best_route(graph, v) for v in graph.vertices}
    prev_edges = set(graph.edges)
    reach = access_reach_m(s)

    def node_entries() -> dict[str, dict]:
        out = {}
        for n in infra:
            pos = positions[n.id]
            charge = energies[n.id].charge_wh if n.id in energies else None
            out[n.id] = {"x": pos.x, "y": pos.y, "charge_wh": charge, "operational": operational[n.id]}
        return out

    def terminal_entries(t: float) -> dict[str, dict]:
        out = {}
        for track in terminals:
            assoc = associate_terminal(track.position_at(t), graph, s, positions, routes=routes, reach=reach)
            if assoc is None:
                out[track.id] = {"serving": None, "downlink_mbps": 0.0, "uplink_mbps": 0.0, "hops": 0}
            else:
                out[track.id] = {
                    "serving": assoc.serving_node,
                    "downlink_mbps": assoc.downlink_mbps,
                    "uplink_mbps": assoc.uplink_mbps,
                    "hops": assoc.hops,
                }
        return out

    yield MetricsRecord(0.0, node_entries(), terminal_entries(0.0), [])

    for k in range(1, n_steps + 1):
        t = k * dt
        events: list[dict] = []

        for nid, st in buoys.items():
            buoys[nid] = step_buoy(st, dt, rngs[nid])

        flipped = False
        time_of_day = (p.start_time_s + (k - 1) * dt) % 86400.0
        factor = solar_factor(time_of_day, s.environment)
        for n in infra:
            if n.id not in energies:
                continue
            before = energies[n.id]
            after = step_energy(before, n.energy, factor, dt)
            energies[n.id] = after
            if after.operational != before.operational:
                flipped = True
                events.append({"event": "node_on" if after.operational else "node_off", "node": n.id})

        operational = operational_map()
        positions = position_map()

        # refresh on schedule, and immediately on any power flip so outages
        # are never masked until the next scheduled rebuild
        if flipped or k % p.topology_refresh == 0:
            graph = build_link_graph(s, operational, positions)
            routes = {v: best_route(graph, v) for v in graph.vertices}
            edges = set(graph.edges)
            for a, b in sorted(prev_edges - edges):
                events.append({"event": "link_lost", "a": a, "b": b})
            for a, b in sorted(edges - prev_edges):
                events.append({"event": "link_gained", "a": a, "b": b})
            prev_edges = edges

        yield MetricsRecord(t, node_entries(), terminal_entries(t), events)


def simulate_to_jsonl(s: Scenario, terminals: tuple[TerminalTrack, ...], path: str) -> int:
    """Run and stream the metrics log to ``path``; returns the record count."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_record_line(metrics_header(s)) + "\n")
        for rec in run_simulation(s, terminals):
            fh.write(_record_line(record_to_dict(rec)) + "\n")
            count += 1
    return count


# --- bundled calibration scenario ----------------------------------------

def _infra_radio() -> RadioConfig:
    return RadioConfig(
        band="5GHz",
        center_frequency_hz=5.5e9,
        channel_width_mhz=160,
        tx_power_dbm=27.0,
        antenna_gain_dbi=8.0,
        spatial_streams=2,
        guard_interval_us=0.8,
        noise_figure_db=7.0,
        max_mcs=11,
    )


def _solar_profile() -> EnergyProfile:
    return EnergyProfile(
        panel_max_w=100.0,
        battery_capacity_wh=768.0,
        load_w=12.0,
        duty_cycle=1.0,
        off_threshold_wh=0.0,
    )


def build_redsea_scenario() -> Scenario:
    """Coastal 2 km bay deployment: gateway mast R1, solar relays R2-R6 along
    the shore arc, one buoy inside the relay hull and one outside.

    Layout honors the deployment rules the validator enforces: >= 300 m
    between any two infrastructure nodes, 2 km between R1 and R6, and a
    1 km^2 planning extent.
    """
    def relay(nid: str, x: float, y: float) -> NodeSpec:
        return NodeSpec(
            id=nid, kind=NodeKind.RELAY_ISLAND, position=EnuPoint(x, y),
            antenna_height_m=3.0, radio=_infra_radio(), energy=_solar_profile(),
            power_stations=1,
        )

    def buoy(nid: str, x: float, y: float) -> NodeSpec:
        return NodeSpec(
            id=nid, kind=NodeKind.BUOY, position=EnuPoint(x, y),
            antenna_height_m=1.5, radio=_infra_radio(), energy=_solar_profile(),
            anchor=AnchorSpec(
                anchor_point=EnuPoint(x, y), chain_radius_m=30.0,
                drift_sigma=0.05, current_mps=(0.05, 0.0),
            ),
        )

    nodes = (
        NodeSpec(
            id="R1", kind=NodeKind.BASE_STATION, position=EnuPoint(0.0, 0.0),
            antenna_height_m=18.0, radio=_infra_radio(), gateway=True,
        ),
        relay("R2", 400.0, 194.0),
        relay("R3", 800.0, 313.8),
        relay("R4", 1200.0, 313.8),
        relay("R5", 1600.0, 194.0),
        relay("R6", 2000.0, 0.0),
        buoy("B1", 1000.0, 60.0),
        buoy("B2", 600.0, -120.0),
    )
    return Scenario(
        name="redsea-coastal-mesh",
        origin=GeoPoint(22.305, 39.104),
        nodes=nodes,
        environment=Environment(
            weather_factor=0.9,
            sunrise_s=6 * 3600.0,
            sunset_s=18 * 3600.0,
            extra_loss_db=14.0,
            mac_efficiency=0.65,
            snr_gap_db=6.02,
            link_floor_mbps=6.0,
        ),
        prices=PriceList(
            router_cents=7879,
            power_station_cents=11006,
            solar_panel_cents=4202,
            misc_cents=1400,
        ),
        sim_params=SimParams(
            dt_s=1.0, duration_s=86400.0, seed=42,
            topology_refresh=60, start_time_s=8 * 3600.0,
        ),
        extent=(0.0, -150.0, 2000.0, 350.0),
    )
