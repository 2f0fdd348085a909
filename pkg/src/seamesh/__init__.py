"""Planning and simulation for 802.11ax maritime mesh deployments."""

from .errors import SeameshError
from .geo import EnuPoint, GeoPoint, Polygon, clamp_to_disk, convex_hull, point_in_polygon, project, unproject
from .model import (
    AnchorSpec,
    CostReport,
    EnergyProfile,
    Environment,
    Finding,
    NodeKind,
    NodeSpec,
    PriceList,
    RadioConfig,
    Scenario,
    SimParams,
    estimate_cost,
    load_scenario,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
    scenario_with_nodes,
    validate_scenario,
)
from .radio import LinkBudget, McsEntry, MCS_TABLE, link_budget, phy_rate_mbps, select_mcs
from .mesh import Association, CoverageGrid, LinkGraph, Route, associate_terminal, best_route, build_link_graph, coverage_grid
from .engine import MetricsRecord, TerminalTrack, build_redsea_scenario, run_simulation, simulate_to_jsonl

__version__ = "0.1.0"

__all__ = [
    "SeameshError",
    "EnuPoint", "GeoPoint", "Polygon", "clamp_to_disk", "convex_hull",
    "point_in_polygon", "project", "unproject",
    "AnchorSpec", "CostReport", "EnergyProfile", "Environment", "Finding",
    "NodeKind", "NodeSpec", "PriceList", "RadioConfig", "Scenario", "SimParams",
    "estimate_cost", "load_scenario", "save_scenario", "scenario_from_dict",
    "scenario_to_dict", "scenario_with_nodes", "validate_scenario",
    "LinkBudget", "McsEntry", "MCS_TABLE", "link_budget", "phy_rate_mbps", "select_mcs",
    "Association", "CoverageGrid", "LinkGraph", "Route", "associate_terminal",
    "best_route", "build_link_graph", "coverage_grid",
    "MetricsRecord", "TerminalTrack", "build_redsea_scenario", "run_simulation",
    "simulate_to_jsonl",
    "__version__",
]
