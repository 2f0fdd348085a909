"""Simulation loop: record stream shape, invariants, events, bundled scenario."""

import dataclasses
import json

import pytest

from seamesh.engine import (
    METRICS_SCHEMA,
    TerminalTrack,
    build_redsea_scenario,
    metrics_header,
    record_to_dict,
    run_simulation,
    simulate_to_jsonl,
    terminal_track_from_dict,
)
from seamesh.errors import SeameshError
from seamesh.geo import EnuPoint, GeoPoint, convex_hull, distance_2d, point_in_polygon
from seamesh.model import (
    EnergyProfile,
    Environment,
    NodeKind,
    NodeSpec,
    PriceList,
    RadioConfig,
    Scenario,
    SimParams,
    validate_scenario,
)

RADIO = RadioConfig(
    band="5GHz", center_frequency_hz=5.5e9, channel_width_mhz=160,
    tx_power_dbm=27.0, antenna_gain_dbi=8.0, spatial_streams=2,
)


def _tiny(sim=None, env=None, nodes=None):
    ns = nodes or (
        NodeSpec(id="g", kind=NodeKind.BASE_STATION, position=EnuPoint(0, 0),
                 antenna_height_m=18.0, radio=RADIO, gateway=True),
        NodeSpec(id="r", kind=NodeKind.RELAY_ISLAND, position=EnuPoint(800, 0),
                 antenna_height_m=3.0, radio=RADIO),
    )
    return Scenario(
        name="tiny", origin=GeoPoint(0.0, 0.0), nodes=ns,
        environment=env or Environment(), prices=PriceList(),
        sim_params=sim or SimParams(duration_s=10, dt_s=1),
    )


class TestTerminalTrack:
    def test_single_waypoint_is_stationary(self):
        tr = TerminalTrack("t", (EnuPoint(3, 4),))
        assert tr.position_at(0.0) == EnuPoint(3, 4)
        assert tr.position_at(999.0) == EnuPoint(3, 4)

    def test_constant_speed_interpolation(self):
        tr = TerminalTrack("t", (EnuPoint(0, 0), EnuPoint(100, 0)), speed_mps=10.0)
        assert tr.position_at(5.0) == EnuPoint(50.0, 0.0)

    def test_holds_at_final_waypoint(self):
        tr = TerminalTrack("t", (EnuPoint(0, 0), EnuPoint(100, 0)), speed_mps=10.0)
        assert tr.position_at(1e6) == EnuPoint(100.0, 0.0)

    def test_multi_segment(self):
        tr = TerminalTrack("t", (EnuPoint(0, 0), EnuPoint(60, 0), EnuPoint(60, 80)),
                           speed_mps=20.0)
        assert tr.position_at(3.0) == EnuPoint(60.0, 0.0)
        assert tr.position_at(5.0) == EnuPoint(60.0, 40.0)

    def test_from_dict(self):
        tr = terminal_track_from_dict(
            {"id": "v1", "waypoints": [[0, 0], [10, 10]], "speed_mps": 2})
        assert tr.id == "v1" and len(tr.waypoints) == 2 and tr.speed_mps == 2.0


class TestRunSimulation:
    def test_zero_duration_yields_initial_record_only(self):
        recs = list(run_simulation(_tiny(sim=SimParams(duration_s=0))))
        assert len(recs) == 1
        assert recs[0].t_s == 0.0

    def test_record_count_and_time_axis(self):
        recs = list(run_simulation(_tiny(sim=SimParams(duration_s=10, dt_s=2))))
        assert [r.t_s for r in recs] == [0.0, 2.0, 4.0, 6.0, 8.0, 10.0]

    def test_rejects_invalid_scenario(self):
        bad = _tiny(nodes=(
            NodeSpec(id="r", kind=NodeKind.RELAY_ISLAND, position=EnuPoint(0, 0),
                     antenna_height_m=3.0, radio=RADIO),
        ))
        assert any(f.severity == "error" for f in validate_scenario(bad))
        with pytest.raises(SeameshError) as exc:
            list(run_simulation(bad))
        assert exc.value.code == "REJECTED_SCENARIO"

    def test_mains_powered_static_pair_never_changes(self):
        recs = list(run_simulation(_tiny(sim=SimParams(duration_s=120, dt_s=1))))
        first = recs[0]
        for rec in recs[1:]:
            assert rec.nodes == first.nodes
            assert rec.events == []
        assert first.nodes["g"]["charge_wh"] is None  # no battery fitted
        assert first.nodes["g"]["operational"] is True

    def test_terminal_entries_track_association(self):
        track = TerminalTrack("v", (EnuPoint(50, 0),))
        recs = list(run_simulation(_tiny(sim=SimParams(duration_s=5)), (track,)))
        for rec in recs:
            entry = rec.terminals["v"]
            assert entry["serving"] == "g"
            assert entry["downlink_mbps"] > 0
            assert entry["hops"] == 1

    def test_unserved_terminal_zeroed(self):
        track = TerminalTrack("v", (EnuPoint(50_000, 0),))
        recs = list(run_simulation(_tiny(sim=SimParams(duration_s=2)), (track,)))
        assert recs[-1].terminals["v"] == {
            "serving": None, "downlink_mbps": 0.0, "uplink_mbps": 0.0, "hops": 0}

    def test_depletion_emits_node_off_then_link_events(self):
        # battery-only relay drains 12 Wh/h from 24 Wh: off strictly inside the run
        drained = EnergyProfile(panel_max_w=0.0, battery_capacity_wh=24.0,
                                load_w=12.0, duty_cycle=1.0)
        nodes = (
            NodeSpec(id="g", kind=NodeKind.BASE_STATION, position=EnuPoint(0, 0),
                     antenna_height_m=18.0, radio=RADIO, gateway=True),
            NodeSpec(id="r", kind=NodeKind.RELAY_ISLAND, position=EnuPoint(800, 0),
                     antenna_height_m=3.0, radio=RADIO, energy=drained),
        )
        s = _tiny(nodes=nodes, sim=SimParams(duration_s=4 * 3600, dt_s=60))
        events = [(rec.t_s, e) for rec in run_simulation(s) for e in rec.events]
        offs = [(t, e) for t, e in events if e["event"] == "node_off"]
        assert len(offs) == 1
        t_off, e_off = offs[0]
        assert e_off == {"event": "node_off", "node": "r"}
        assert t_off == pytest.approx(7200.0, abs=60.0)  # 24 Wh / 12 W, +- one tick
        lost = [(t, e) for t, e in events if e["event"] == "link_lost"]
        assert {(e["a"], e["b"]) for _, e in lost} == {("g", "r"), ("r", "g")}
        assert all(t == t_off for t, _ in lost)

    def test_events_match_operational_state(self):
        drained = EnergyProfile(panel_max_w=0.0, battery_capacity_wh=24.0,
                                load_w=12.0, duty_cycle=1.0)
        nodes = (
            NodeSpec(id="g", kind=NodeKind.BASE_STATION, position=EnuPoint(0, 0),
                     antenna_height_m=18.0, radio=RADIO, gateway=True),
            NodeSpec(id="r", kind=NodeKind.RELAY_ISLAND, position=EnuPoint(800, 0),
                     antenna_height_m=3.0, radio=RADIO, energy=drained),
        )
        s = _tiny(nodes=nodes, sim=SimParams(duration_s=4 * 3600, dt_s=60))
        state = True
        for rec in run_simulation(s):
            for e in rec.events:
                if e.get("node") == "r":
                    state = e["event"] == "node_on"
            assert rec.nodes["r"]["operational"] == state

    def test_charge_bounded_and_buoy_chained(self):
        s = build_redsea_scenario()
        s = dataclasses.replace(s, sim_params=dataclasses.replace(
            s.sim_params, duration_s=1800, dt_s=1))
        anchors = {n.id: n.anchor for n in s.nodes if n.anchor is not None}
        caps = {n.id: n.energy.battery_capacity_wh for n in s.nodes if n.energy}
        for rec in run_simulation(s):
            for nid, entry in rec.nodes.items():
                if nid in caps:
                    assert 0.0 <= entry["charge_wh"] <= caps[nid]
                if nid in anchors:
                    a = anchors[nid]
                    assert distance_2d(EnuPoint(entry["x"], entry["y"]),
                                       a.anchor_point) <= a.chain_radius_m + 1e-9


class TestJsonlStream:
    def test_header_then_records(self, tmp_path):
        out = tmp_path / "run.jsonl"
        s = _tiny(sim=SimParams(duration_s=5, dt_s=1))
        n = simulate_to_jsonl(s, (), str(out))
        lines = out.read_text().splitlines()
        assert n == 6
        assert len(lines) == 7
        head = json.loads(lines[0])
        assert head == metrics_header(s)
        assert head["schema"] == METRICS_SCHEMA
        times = [json.loads(ln)["t"] for ln in lines[1:]]
        assert times == sorted(times) and len(set(times)) == len(times)

    def test_record_dict_shape(self):
        rec = next(iter(run_simulation(_tiny(sim=SimParams(duration_s=0)))))
        d = record_to_dict(rec)
        assert set(d) == {"t", "nodes", "terminals", "events"}
        json.dumps(d)  # must be JSON-serializable as-is


class TestBundledScenario:
    def test_validates_clean(self):
        s = build_redsea_scenario()
        assert validate_scenario(s) == []

    def test_layout_rules(self):
        s = build_redsea_scenario()
        infra = [n for n in s.nodes if n.is_infrastructure]
        for i, a in enumerate(infra):
            for b in infra[i + 1:]:
                assert distance_2d(a.position, b.position) >= 300.0
        r1 = s.node("R1").position
        r6 = s.node("R6").position
        assert distance_2d(r1, r6) == pytest.approx(2000.0, abs=1.0)
        x0, y0, x1, y1 = s.extent
        assert (x1 - x0) * (y1 - y0) == pytest.approx(1_000_000.0)

    def test_buoys_straddle_relay_hull(self):
        s = build_redsea_scenario()
        hull = convex_hull([s.node(f"R{i}").position for i in range(1, 7)])
        assert point_in_polygon(s.node("B1").position, hull) == "inside"
        assert point_in_polygon(s.node("B2").position, hull) == "outside"

    def test_gateway_and_power(self):
        s = build_redsea_scenario()
        assert s.node("R1").gateway
        assert s.node("R1").energy is None  # mains at the base station
        assert sum(n.power_stations for n in s.nodes) == 5
