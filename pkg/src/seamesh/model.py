"""Scenario data model, deployment-rule validation, and cost estimation.

A scenario is a complete deployment description: nodes (with radio, energy,
and anchoring specs), environment, unit prices, and simulation parameters.
Positions are local ENU meters (see :mod:`seamesh.geo`); money is integer
US cents throughout so cost totals are exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from .errors import SeameshError
from .geo import EnuPoint, GeoPoint, distance_2d

MAX_MESH_DEVICES = 256
MIN_SEPARATION_M = 300.0
TX_POWER_CAP_DBM = 27.0  # 500 mW
MAX_NODE_LOAD_W = 18.0
MIN_RELAY_HEIGHT_M = 3.0

VALID_WIDTHS_MHZ = (20, 40, 80, 160)
VALID_GUARD_INTERVALS_US = (0.8, 1.6, 3.2)


class NodeKind(str, Enum):
    BASE_STATION = "base_station"
    RELAY_ISLAND = "relay_island"
    BUOY = "buoy"
    TERMINAL = "terminal"


DEFAULT_ANTENNA_HEIGHT_M = {
    NodeKind.BASE_STATION: 18.0,
    NodeKind.RELAY_ISLAND: 3.0,
    NodeKind.BUOY: 1.5,
    NodeKind.TERMINAL: 1.5,
}


@dataclass(frozen=True)
class RadioConfig:
    band: str  # "2.4GHz" or "5GHz"
    center_frequency_hz: float
    channel_width_mhz: int
    tx_power_dbm: float
    antenna_gain_dbi: float = 0.0
    spatial_streams: int = 1
    guard_interval_us: float = 0.8
    noise_figure_db: float = 7.0
    max_mcs: int = 11

    def __post_init__(self):
        if self.band not in ("2.4GHz", "5GHz"):
            raise ValueError(f"unknown band {self.band!r}")
        if self.center_frequency_hz <= 0:
            raise ValueError("center_frequency_hz must be positive")
        if self.channel_width_mhz not in VALID_WIDTHS_MHZ:
            raise ValueError(f"channel_width_mhz must be one of {VALID_WIDTHS_MHZ}")
        if self.channel_width_mhz == 160 and self.band != "5GHz":
            raise ValueError("160 MHz channels exist only on the 5GHz band")
        if self.spatial_streams < 1:
            raise ValueError("spatial_streams must be >= 1")
        if self.guard_interval_us not in VALID_GUARD_INTERVALS_US:
            raise ValueError(f"guard_interval_us must be one of {VALID_GUARD_INTERVALS_US}")
        if not 0 <= self.max_mcs <= 11:
            raise ValueError("max_mcs must be in 0..11")


@dataclass(frozen=True)
class EnergyProfile:
    panel_max_w: float
    battery_capacity_wh: float
    load_w: float
    duty_cycle: float = 1.0
    off_threshold_wh: float = 0.0
    on_threshold_wh: float | None = None  # default: 5% of capacity

    def __post_init__(self):
        if self.panel_max_w < 0:
            raise ValueError("panel_max_w must be >= 0")
        if self.battery_capacity_wh <= 0:
            raise ValueError("battery_capacity_wh must be positive")
        if self.load_w < 0:
            raise ValueError("load_w must be >= 0")
        if not 0 < self.duty_cycle <= 1:
            raise ValueError("duty_cycle must be in (0, 1]")
        if self.on_threshold_wh is None:
            object.__setattr__(self, "on_threshold_wh", 0.05 * self.battery_capacity_wh)
        # hysteresis gap must be positive or the operational flag would flap
        if not 0 <= self.off_threshold_wh < self.on_threshold_wh <= self.battery_capacity_wh:
            raise ValueError("need 0 <= off_threshold < on_threshold <= capacity")


@dataclass(frozen=True)
class AnchorSpec:
    anchor_point: EnuPoint
    chain_radius_m: float
    drift_sigma: float = 0.05  # m/sqrt(s)
    current_mps: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.chain_radius_m <= 0:
            raise ValueError("chain_radius_m must be positive")
        if self.drift_sigma < 0:
            raise ValueError("drift_sigma must be >= 0")


@dataclass(frozen=True)
class NodeSpec:
    id: str
    kind: NodeKind
    position: EnuPoint
    antenna_height_m: float
    radio: RadioConfig
    energy: EnergyProfile | None = None  # absent: mains (base) / not simulated (terminal)
    anchor: AnchorSpec | None = None
    gateway: bool = False
    power_stations: int = 0

    def __post_init__(self):
        if not self.id:
            raise ValueError("node id must be non-empty")
        if self.antenna_height_m <= 0:
            raise ValueError("antenna_height_m must be positive")
        if self.power_stations < 0:
            raise ValueError("power_stations must be >= 0")

    @property
    def is_infrastructure(self) -> bool:
        return self.kind != NodeKind.TERMINAL


@dataclass(frozen=True)
class Environment:
    weather_factor: float = 1.0
    sunrise_s: float = 6 * 3600.0
    sunset_s: float = 18 * 3600.0
    extra_loss_db: float = 10.0
    mac_efficiency: float = 0.65
    snr_gap_db: float = 6.02
    link_floor_mbps: float = 6.0

    def __post_init__(self):
        if not 0 <= self.weather_factor <= 1:
            raise ValueError("weather_factor must be in [0, 1]")
        if not 0 <= self.sunrise_s < self.sunset_s <= 86400:
            raise ValueError("need 0 <= sunrise < sunset <= 86400")
        if self.extra_loss_db < 0:
            raise ValueError("extra_loss_db must be >= 0")
        if not 0 < self.mac_efficiency <= 1:
            raise ValueError("mac_efficiency must be in (0, 1]")
        if self.snr_gap_db < 0:
            raise ValueError("snr_gap_db must be >= 0")
        if self.link_floor_mbps < 0:
            raise ValueError("link_floor_mbps must be >= 0")


@dataclass(frozen=True)
class PriceList:
    """Unit prices in integer US cents; ``None`` means not priced."""

    router_cents: int | None = None
    power_station_cents: int | None = None
    solar_panel_cents: int | None = None
    misc_cents: int | None = None

    def __post_init__(self):
        for name in ("router_cents", "power_station_cents", "solar_panel_cents", "misc_cents"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or v < 0):
                raise ValueError(f"{name} must be a non-negative integer (cents)")


@dataclass(frozen=True)
class SimParams:
    dt_s: float = 1.0
    duration_s: float = 86400.0
    seed: int = 0
    topology_refresh: int = 60
    start_time_s: float = 8 * 3600.0  # sim clock at t=0, seconds of day

    def __post_init__(self):
        if self.dt_s <= 0:
            raise ValueError("dt_s must be positive")
        if self.duration_s < 0:
            raise ValueError("duration_s must be >= 0")
        if self.topology_refresh < 1:
            raise ValueError("topology_refresh must be >= 1")
        if not 0 <= self.start_time_s < 86400:
            raise ValueError("start_time_s must be in [0, 86400)")


def default_terminal_radio() -> RadioConfig:
    """Handheld-class endpoint used for coverage probing and access links."""
    return RadioConfig(
        band="5GHz",
        center_frequency_hz=5.5e9,
        channel_width_mhz=160,
        tx_power_dbm=15.0,
        antenna_gain_dbi=0.0,
        spatial_streams=1,
    )


@dataclass(frozen=True)
class Scenario:
    name: str
    origin: GeoPoint
    nodes: tuple[NodeSpec, ...]
    environment: Environment = field(default_factory=Environment)
    prices: PriceList = field(default_factory=PriceList)
    sim_params: SimParams = field(default_factory=SimParams)
    extent: tuple[float, float, float, float] | None = None  # min_x, min_y, max_x, max_y
    terminal_height_m: float = 1.5
    terminal_radio: RadioConfig = field(default_factory=default_terminal_radio)

    def __post_init__(self):
        if self.terminal_height_m <= 0:
            raise ValueError("terminal_height_m must be positive")
        if self.extent is not None and len(self.extent) != 4:
            raise ValueError("extent must be (min_x, min_y, max_x, max_y)")

    def node(self, node_id: str) -> NodeSpec:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def infrastructure(self) -> tuple[NodeSpec, ...]:
        cached = self.__dict__.get("_infra")
        if cached is None:
            cached = tuple(n for n in self.nodes if n.is_infrastructure)
            object.__setattr__(self, "_infra", cached)
        return cached


def scenario_with_nodes(s: Scenario, node_ids: list[str] | tuple[str, ...]) -> Scenario:
    """Copy of ``s`` keeping only the named nodes (order preserved)."""
    keep = set(node_ids)
    return replace(s, nodes=tuple(n for n in s.nodes if n.id in keep))


# --- validation ---------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    code: str
    message: str


def _finding(severity: str, code: str, message: str) -> Finding:
    return Finding(severity, code, message)


def validate_scenario(s: Scenario) -> list[Finding]:
    """Check deployment rules; errors make a scenario unusable, warnings don't."""
    findings: list[Finding] = []

    seen: set[str] = set()
    for n in s.nodes:
        if n.id in seen:
            findings.append(_finding("error", "DUPLICATE_NODE_ID", f"node id {n.id!r} appears more than once"))
        seen.add(n.id)

    gateways = [n for n in s.nodes if n.gateway and n.kind == NodeKind.BASE_STATION]
    if not gateways:
        findings.append(_finding("error", "NO_GATEWAY", "scenario has no gateway base station"))

    if len(s.nodes) > MAX_MESH_DEVICES:
        findings.append(_finding(
            "error", "MESH_SIZE_EXCEEDED",
            f"{len(s.nodes)} nodes exceed the {MAX_MESH_DEVICES}-device mesh limit"))

    for n in s.nodes:
        if n.kind == NodeKind.BUOY:
            if n.anchor is None:
                findings.append(_finding("error", "MISSING_ANCHOR", f"buoy {n.id!r} has no anchor"))
            else:
                slack = distance_2d(n.position, n.anchor.anchor_point) - n.anchor.chain_radius_m
                if slack > 1e-9:
                    findings.append(_finding(
                        "error", "ANCHOR_OUT_OF_RANGE",
                        f"buoy {n.id!r} starts {slack:.1f} m beyond its chain radius"))
        if n.radio.tx_power_dbm > TX_POWER_CAP_DBM:
            findings.append(_finding(
                "warning", "TX_POWER_EXCEEDS_500MW",
                f"node {n.id!r} tx power {n.radio.tx_power_dbm} dBm exceeds 27 dBm (500 mW)"))
        if n.kind == NodeKind.RELAY_ISLAND and n.antenna_height_m < MIN_RELAY_HEIGHT_M:
            findings.append(_finding(
                "warning", "RELAY_HEIGHT_BELOW_3M",
                f"relay {n.id!r} antenna at {n.antenna_height_m} m is below the 3 m guideline"))
        if n.energy is not None and n.energy.load_w > MAX_NODE_LOAD_W:
            findings.append(_finding(
                "warning", "LOAD_EXCEEDS_18W",
                f"node {n.id!r} load {n.energy.load_w} W exceeds the 18 W ceiling"))

    infra = [n for n in s.nodes if n.is_infrastructure]
    for i in range(len(infra)):
        for j in range(i + 1, len(infra)):
            d = distance_2d(infra[i].position, infra[j].position)
            if d < MIN_SEPARATION_M:
                findings.append(_finding(
                    "warning", "SEPARATION_BELOW_300M",
                    f"nodes {infra[i].id!r} and {infra[j].id!r} are {d:.1f} m apart (< 300 m)"))

    return findings


def has_errors(findings: list[Finding]) -> bool:
    return any(f.severity == "error" for f in findings)


# --- cost estimation ----------------------------------------------------

@dataclass(frozen=True)
class CostItem:
    label: str
    count: int
    unit_cents: int
    subtotal_cents: int


@dataclass(frozen=True)
class CostReport:
    items: tuple[CostItem, ...]
    total_cents: int


def cents_to_usd(cents: int) -> str:
    sign = "-" if cents < 0 else ""
    cents = abs(cents)
    return f"{sign}{cents // 100}.{cents % 100:02d}"


def estimate_cost(s: Scenario, prices: PriceList | None = None) -> CostReport:
    """Bill of materials from node kinds: one router per infrastructure node,
    one panel per solar-powered node, power stations as declared per node.
    """
    p = prices if prices is not None else s.prices
    routers = sum(1 for n in s.nodes if n.is_infrastructure)
    panels = sum(1 for n in s.nodes if n.energy is not None and n.energy.panel_max_w > 0)
    stations = sum(n.power_stations for n in s.nodes)

    items: list[CostItem] = []
    for label, count, unit in (
        ("router", routers, p.router_cents),
        ("power_station", stations, p.power_station_cents),
        ("solar_panel", panels, p.solar_panel_cents),
    ):
        if count == 0:
            continue
        if unit is None:
            raise SeameshError("MISSING_PRICE", f"no unit price for {label!r} ({count} needed)")
        items.append(CostItem(label, count, unit, count * unit))
    misc = p.misc_cents if p.misc_cents is not None else 0
    if misc:
        items.append(CostItem("misc", 1, misc, misc))

    total = sum(it.subtotal_cents for it in items)
    return CostReport(tuple(items), total)


# --- serialization ------------------------------------------------------

def _radio_to_dict(r: RadioConfig) -> dict[str, Any]:
    return {
        "band": r.band,
        "center_frequency_hz": r.center_frequency_hz,
        "channel_width_mhz": r.channel_width_mhz,
        "tx_power_dbm": r.tx_power_dbm,
        "antenna_gain_dbi": r.antenna_gain_dbi,
        "spatial_streams": r.spatial_streams,
        "guard_interval_us": r.guard_interval_us,
        "noise_figure_db": r.noise_figure_db,
        "max_mcs": r.max_mcs,
    }


def _radio_from_dict(d: dict[str, Any]) -> RadioConfig:
    return RadioConfig(
        band=d["band"],
        center_frequency_hz=float(d["center_frequency_hz"]),
        channel_width_mhz=int(d["channel_width_mhz"]),
        tx_power_dbm=float(d["tx_power_dbm"]),
        antenna_gain_dbi=float(d.get("antenna_gain_dbi", 0.0)),
        spatial_streams=int(d.get("spatial_streams", 1)),
        guard_interval_us=float(d.get("guard_interval_us", 0.8)),
        noise_figure_db=float(d.get("noise_figure_db", 7.0)),
        max_mcs=int(d.get("max_mcs", 11)),
    )


def _node_to_dict(n: NodeSpec) -> dict[str, Any]:
    d: dict[str, Any] = {
        "id": n.id,
        "kind": n.kind.value,
        "position": [n.position.x, n.position.y],
        "antenna_height_m": n.antenna_height_m,
        "gateway": n.gateway,
        "power_stations": n.power_stations,
        "radio": _radio_to_dict(n.radio),
        "energy": None,
        "anchor": None,
    }
    if n.energy is not None:
        d["energy"] = {
            "panel_max_w": n.energy.panel_max_w,
            "battery_capacity_wh": n.energy.battery_capacity_wh,
            "load_w": n.energy.load_w,
            "duty_cycle": n.energy.duty_cycle,
            "off_threshold_wh": n.energy.off_threshold_wh,
            "on_threshold_wh": n.energy.on_threshold_wh,
        }
    if n.anchor is not None:
        d["anchor"] = {
            "anchor_point": [n.anchor.anchor_point.x, n.anchor.anchor_point.y],
            "chain_radius_m": n.anchor.chain_radius_m,
            "drift_sigma": n.anchor.drift_sigma,
            "current_mps": list(n.anchor.current_mps),
        }
    return d


def _node_from_dict(d: dict[str, Any]) -> NodeSpec:
    kind = NodeKind(d["kind"])
    energy = None
    if d.get("energy") is not None:
        e = d["energy"]
        energy = EnergyProfile(
            panel_max_w=float(e["panel_max_w"]),
            battery_capacity_wh=float(e["battery_capacity_wh"]),
            load_w=float(e["load_w"]),
            duty_cycle=float(e.get("duty_cycle", 1.0)),
            off_threshold_wh=float(e.get("off_threshold_wh", 0.0)),
            on_threshold_wh=(float(e["on_threshold_wh"]) if e.get("on_threshold_wh") is not None else None),
        )
    anchor = None
    if d.get("anchor") is not None:
        a = d["anchor"]
        anchor = AnchorSpec(
            anchor_point=EnuPoint(*[float(v) for v in a["anchor_point"]]),
            chain_radius_m=float(a["chain_radius_m"]),
            drift_sigma=float(a.get("drift_sigma", 0.05)),
            current_mps=tuple(float(v) for v in a.get("current_mps", (0.0, 0.0))),
        )
    height = d.get("antenna_height_m")
    if height is None:
        height = DEFAULT_ANTENNA_HEIGHT_M[kind]
    return NodeSpec(
        id=d["id"],
        kind=kind,
        position=EnuPoint(*[float(v) for v in d["position"]]),
        antenna_height_m=float(height),
        radio=_radio_from_dict(d["radio"]),
        energy=energy,
        anchor=anchor,
        gateway=bool(d.get("gateway", False)),
        power_stations=int(d.get("power_stations", 0)),
    )


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    return {
        "name": s.name,
        "origin": {"lat": s.origin.lat, "lon": s.origin.lon},
        "nodes": [_node_to_dict(n) for n in s.nodes],
        "environment": {
            "weather_factor": s.environment.weather_factor,
            "sunrise_s": s.environment.sunrise_s,
            "sunset_s": s.environment.sunset_s,
            "extra_loss_db": s.environment.extra_loss_db,
            "mac_efficiency": s.environment.mac_efficiency,
            "snr_gap_db": s.environment.snr_gap_db,
            "link_floor_mbps": s.environment.link_floor_mbps,
        },
        "prices": {
            "router": s.prices.router_cents,
            "power_station": s.prices.power_station_cents,
            "solar_panel": s.prices.solar_panel_cents,
            "misc": s.prices.misc_cents,
        },
        "sim_params": {
            "dt_s": s.sim_params.dt_s,
            "duration_s": s.sim_params.duration_s,
            "seed": s.sim_params.seed,
            "topology_refresh": s.sim_params.topology_refresh,
            "start_time_s": s.sim_params.start_time_s,
        },
        "extent": list(s.extent) if s.extent is not None else None,
        "terminal": {
            "height_m": s.terminal_height_m,
            "radio": _radio_to_dict(s.terminal_radio),
        },
    }


def _price_field(d: dict[str, Any], key: str) -> int | None:
    v = d.get(key)
    if v is None:
        return None
    if isinstance(v, float) and not v.is_integer():
        raise ValueError(f"price {key!r} must be integer cents, got {v}")
    return int(v)


def scenario_from_dict(d: dict[str, Any]) -> Scenario:
    env = d.get("environment", {}) or {}
    prices = d.get("prices", {}) or {}
    sim = d.get("sim_params", {}) or {}
    term = d.get("terminal", {}) or {}
    origin = d.get("origin", {}) or {}
    extent = d.get("extent")
    return Scenario(
        name=str(d.get("name", "unnamed")),
        origin=GeoPoint(float(origin.get("lat", 0.0)), float(origin.get("lon", 0.0))),
        nodes=tuple(_node_from_dict(nd) for nd in d.get("nodes", [])),
        environment=Environment(
            weather_factor=float(env.get("weather_factor", 1.0)),
            sunrise_s=float(env.get("sunrise_s", 6 * 3600.0)),
            sunset_s=float(env.get("sunset_s", 18 * 3600.0)),
            extra_loss_db=float(env.get("extra_loss_db", 10.0)),
            mac_efficiency=float(env.get("mac_efficiency", 0.65)),
            snr_gap_db=float(env.get("snr_gap_db", 6.02)),
            link_floor_mbps=float(env.get("link_floor_mbps", 6.0)),
        ),
        prices=PriceList(
            router_cents=_price_field(prices, "router"),
            power_station_cents=_price_field(prices, "power_station"),
            solar_panel_cents=_price_field(prices, "solar_panel"),
            misc_cents=_price_field(prices, "misc"),
        ),
        sim_params=SimParams(
            dt_s=float(sim.get("dt_s", 1.0)),
            duration_s=float(sim.get("duration_s", 86400.0)),
            seed=int(sim.get("seed", 0)),
            topology_refresh=int(sim.get("topology_refresh", 60)),
            start_time_s=float(sim.get("start_time_s", 8 * 3600.0)),
        ),
        extent=tuple(float(v) for v in extent) if extent is not None else None,
        terminal_height_m=float(term.get("height_m", 1.5)),
        terminal_radio=(_radio_from_dict(term["radio"]) if term.get("radio") else default_terminal_radio()),
    )


def save_scenario(s: Scenario, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(s), fh, indent=2)
        fh.write("\n")


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))
