"""Link graph, multi-hop routing, terminal association, coverage grids.

End-to-end throughput over a relay chain is harmonic: every hop shares the
same half-duplex channel, so capacity is 1/sum(1/r_i). Routing therefore
minimizes sum(1/r_i), which Dijkstra handles with additive weights 1/rate.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import SeameshError
from .geo import EnuPoint
from .model import NodeKind, Scenario
from .radio import link_budget, max_feasible_distance_m


@dataclass(frozen=True)
class LinkGraph:
    """Directed graph over operational infrastructure nodes.

    ``edges[(u, v)]`` is the MAC-layer rate of transmissions u -> v; an edge
    exists only when the budget clears the configured link floor.
    """

    vertices: tuple[str, ...]
    edges: dict[tuple[str, str], float]
    gateways: frozenset[str]


@dataclass(frozen=True)
class Route:
    """Path src..gateway; ``rates_mbps[i]`` is the downlink rate of the hop
    carried hops[i+1] -> hops[i] (traffic flows gateway-to-source)."""

    hops: tuple[str, ...]
    rates_mbps: tuple[float, ...]

    @property
    def e2e_throughput_mbps(self) -> float:
        if not self.rates_mbps:
            return math.inf
        return 1.0 / sum(1.0 / r for r in self.rates_mbps)


@dataclass(frozen=True)
class Association:
    serving_node: str
    downlink_mbps: float
    uplink_mbps: float
    hops: int  # access hop + backhaul hops


@dataclass(frozen=True)
class CoverageCell:
    downlink_mbps: float
    uplink_mbps: float
    serving_node: str | None
    hops: int


@dataclass(frozen=True)
class CoverageGrid:
    bbox: tuple[float, float, float, float]
    resolution_m: float
    nx: int
    ny: int
    cells: tuple[CoverageCell, ...]  # row-major, southwest cell first

    def cell_at(self, ix: int, iy: int) -> CoverageCell:
        return self.cells[iy * self.nx + ix]

    def cell_center(self, ix: int, iy: int) -> EnuPoint:
        return EnuPoint(
            self.bbox[0] + (ix + 0.5) * self.resolution_m,
            self.bbox[1] + (iy + 0.5) * self.resolution_m,
        )


def build_link_graph(
    s: Scenario,
    operational: Mapping[str, bool] | None = None,
    positions: Mapping[str, EnuPoint] | None = None,
) -> LinkGraph:
    """Evaluate every ordered infrastructure pair and keep usable edges.

    ``operational``/``positions`` override scenario state during simulation
    (depleted nodes drop out, buoys move).
    """
    infra = [n for n in s.infrastructure() if operational is None or operational.get(n.id, True)]
    pos = {n.id: (positions[n.id] if positions and n.id in positions else n.position) for n in infra}
    edges: dict[tuple[str, str], float] = {}
    floor = s.environment.link_floor_mbps
    for tx in infra:
        for rx in infra:
            if tx.id == rx.id:
                continue
            if tx.radio.band != rx.radio.band or tx.radio.channel_width_mhz != rx.radio.channel_width_mhz:
                continue
            lb = link_budget(
                pos[tx.id], tx.antenna_height_m, tx.radio,
                pos[rx.id], rx.antenna_height_m, rx.radio,
                s.environment,
            )
            if lb.mcs is not None and lb.mac_rate_mbps >= floor:
                edges[(tx.id, rx.id)] = lb.mac_rate_mbps
    gateways = frozenset(n.id for n in infra if n.gateway and n.kind == NodeKind.BASE_STATION)
    return LinkGraph(tuple(n.id for n in infra), edges, gateways)


def best_route(g: LinkGraph, src: str) -> Route | None:
    """Min-sum-of-inverse-rates path from ``src`` to any gateway.

    Search walks src -> gateway but weights each step u -> v by the downlink
    edge (v, u), since payload traffic flows from the gateway outward. Ties
    break on the lexicographically smallest hop sequence.
    """
    if src not in g.vertices:
        return None
    if src in g.gateways:
        return Route((src,), ())

    # preds[u]: nodes w with a downlink edge w -> u, i.e. candidates for the
    # next hop toward the gateway when standing at u.
    preds: dict[str, list[tuple[str, float]]] = {v: [] for v in g.vertices}
    for (a, b), rate in g.edges.items():
        preds[b].append((a, rate))
    for lst in preds.values():
        lst.sort()

    done: set[str] = set()
    heap: list[tuple[float, tuple[str, ...]]] = [(0.0, (src,))]
    while heap:
        cost, path = heapq.heappop(heap)
        u = path[-1]
        if u in done:
            continue
        done.add(u)
        if u in g.gateways:
            rates = tuple(g.edges[(path[i + 1], path[i])] for i in range(len(path) - 1))
            return Route(path, rates)
        for w, rate in preds[u]:
            if w in done:
                continue
            heapq.heappush(heap, (cost + 1.0 / rate, path + (w,)))
    return None


def access_reach_m(s: Scenario) -> dict[str, float]:
    """Per-node upper bound on the 2D distance a terminal can be served from.

    Band/width-incompatible nodes get 0 (they can never serve the default
    terminal radio); used to prune association candidates cheaply.
    """
    reach: dict[str, float] = {}
    tr = s.terminal_radio
    for n in s.infrastructure():
        if n.radio.band != tr.band or n.radio.channel_width_mhz != tr.channel_width_mhz:
            reach[n.id] = 0.0
        else:
            reach[n.id] = max_feasible_distance_m(
                n.radio, tr, n.antenna_height_m, s.terminal_height_m, s.environment)
    return reach


def associate_terminal(
    terminal_pos: EnuPoint,
    g: LinkGraph,
    s: Scenario,
    positions: Mapping[str, EnuPoint] | None = None,
    routes: Mapping[str, Route | None] | None = None,
    reach: Mapping[str, float] | None = None,
) -> Association | None:
    """Pick the serving node maximizing end-to-end downlink throughput.

    Downlink = harmonic combination of the access link and the serving
    node's backhaul route; uplink reuses the winner's path with reversed-
    direction budgets. ``routes``/``reach`` may carry precomputed values.
    Candidates whose best possible access link is already out of range are
    skipped without a full budget.
    """
    height = s.terminal_height_m
    env = s.environment
    tr = s.terminal_radio
    best: tuple[float, str, Route, EnuPoint] | None = None
    for node in s.infrastructure():
        if node.id not in g.vertices:
            continue
        if node.radio.band != tr.band or node.radio.channel_width_mhz != tr.channel_width_mhz:
            continue
        node_pos = positions[node.id] if positions and node.id in positions else node.position
        if reach is not None:
            # +1 m absorbs the 3D-vs-2D and minimum-distance clamping slack
            if math.hypot(terminal_pos.x - node_pos.x, terminal_pos.y - node_pos.y) \
                    > reach.get(node.id, math.inf) + 1.0:
                continue
        if routes is not None:
            route = routes.get(node.id)
        else:
            route = best_route(g, node.id)
        if route is None:
            continue
        down_lb = link_budget(
            node_pos, node.antenna_height_m, node.radio,
            terminal_pos, height, tr, env)
        if down_lb.mcs is None or down_lb.mac_rate_mbps <= 0:
            continue
        inv_down = 1.0 / down_lb.mac_rate_mbps + sum(1.0 / r for r in route.rates_mbps)
        downlink = 1.0 / inv_down
        if best is None or downlink > best[0] or (downlink == best[0] and node.id < best[1]):
            best = (downlink, node.id, route, node_pos)
    if best is None:
        return None

    downlink, node_id, route, node_pos = best
    node = s.node(node_id)
    up_lb = link_budget(
        terminal_pos, height, tr,
        node_pos, node.antenna_height_m, node.radio, env)
    uplink = 0.0
    if up_lb.mcs is not None and up_lb.mac_rate_mbps > 0:
        inv_up = 1.0 / up_lb.mac_rate_mbps
        feasible = True
        for i in range(len(route.hops) - 1):
            rate = g.edges.get((route.hops[i], route.hops[i + 1]))
            if rate is None:
                feasible = False
                break
            inv_up += 1.0 / rate
        if feasible:
            uplink = 1.0 / inv_up
    return Association(node_id, downlink, uplink, 1 + len(route.hops) - 1)


def coverage_grid(
    s: Scenario,
    resolution_m: float,
    operational: Mapping[str, bool] | None = None,
    positions: Mapping[str, EnuPoint] | None = None,
) -> CoverageGrid:
    """Probe a virtual terminal at every cell center of the planning extent."""
    if resolution_m <= 0:
        raise SeameshError("EMPTY_GRID", "resolution must be positive")
    bbox = s.extent
    if bbox is None:
        xs = [n.position.x for n in s.nodes]
        ys = [n.position.y for n in s.nodes]
        if not xs:
            raise SeameshError("EMPTY_GRID", "no extent and no nodes to derive one")
        margin = 100.0
        bbox = (min(xs) - margin, min(ys) - margin, max(xs) + margin, max(ys) + margin)
    min_x, min_y, max_x, max_y = bbox
    if not (max_x > min_x and max_y > min_y):
        raise SeameshError("EMPTY_GRID", f"degenerate extent {bbox}")
    nx = math.ceil((max_x - min_x) / resolution_m)
    ny = math.ceil((max_y - min_y) / resolution_m)
    if nx < 1 or ny < 1:
        raise SeameshError("EMPTY_GRID", "extent smaller than one cell")

    g = build_link_graph(s, operational, positions)
    routes = {v: best_route(g, v) for v in g.vertices}
    reach = access_reach_m(s)

    cells: list[CoverageCell] = []
    for iy in range(ny):
        cy = min_y + (iy + 0.5) * resolution_m
        for ix in range(nx):
            cx = min_x + (ix + 0.5) * resolution_m
            assoc = associate_terminal(EnuPoint(cx, cy), g, s, positions, routes=routes, reach=reach)
            if assoc is None:
                cells.append(CoverageCell(0.0, 0.0, None, 0))
            else:
                cells.append(CoverageCell(
                    assoc.downlink_mbps, assoc.uplink_mbps, assoc.serving_node, assoc.hops))
    return CoverageGrid((min_x, min_y, max_x, max_y), resolution_m, nx, ny, tuple(cells))


def coverage_to_dict(grid: CoverageGrid) -> dict:
    """External document form; rates rounded to 0.01 Mbps."""
    return {
        "schema": "seamesh-coverage/1",
        "bbox": list(grid.bbox),
        "resolution_m": grid.resolution_m,
        "nx": grid.nx,
        "ny": grid.ny,
        "cells": [
            [round(c.downlink_mbps, 2), round(c.uplink_mbps, 2), c.serving_node, c.hops]
            for c in grid.cells
        ],
    }
