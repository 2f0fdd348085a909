"""Command-line front end.

Exit codes: 0 success, 1 scenario/runtime errors (including validation
findings of severity error), 2 usage errors (argparse convention).
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import (
    build_redsea_scenario,
    simulate_to_jsonl,
    terminal_track_from_dict,
)
from .errors import SeameshError
from .mesh import coverage_grid, coverage_to_dict
from .model import (
    Scenario,
    cents_to_usd,
    estimate_cost,
    has_errors,
    load_scenario,
    save_scenario,
    validate_scenario,
)
from .radio import link_budget


def _load(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except OSError as exc:
        raise SeameshError("UNREADABLE_SCENARIO", f"cannot read {path}: {exc.strerror or exc}")
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SeameshError("MALFORMED_SCENARIO", f"cannot parse {path}: {exc}")


def _cmd_validate(args) -> int:
    s = _load(args.scenario)
    findings = validate_scenario(s)
    if args.json:
        print(json.dumps([f.__dict__ for f in findings], indent=2))
    else:
        for f in findings:
            print(f"{f.severity.upper()} {f.code}: {f.message}")
        if not findings:
            print("OK: no findings")
    return 1 if has_errors(findings) else 0


def _cmd_linkbudget(args) -> int:
    s = _load(args.scenario)
    try:
        tx = s.node(getattr(args, "from"))
        rx = s.node(args.to)
    except KeyError as exc:
        raise SeameshError("UNKNOWN_NODE", f"no node with id {exc.args[0]!r}")
    lb = link_budget(
        tx.position, tx.antenna_height_m, tx.radio,
        rx.position, rx.antenna_height_m, rx.radio,
        s.environment,
    )
    if args.json:
        print(json.dumps(lb.__dict__, indent=2))
        return 0
    print(f"distance_m: {lb.distance_m:.2f}")
    print(f"frequency_hz: {lb.frequency_hz:.0f}")
    print(f"path_loss_db: {lb.path_loss_db:.2f}")
    print(f"rx_power_dbm: {lb.rx_power_dbm:.2f}")
    print(f"noise_floor_dbm: {lb.noise_floor_dbm:.2f}")
    print(f"snr_db: {lb.snr_db:.2f}")
    print(f"beyond_horizon: {lb.beyond_horizon}")
    print(f"mcs: {lb.mcs if lb.mcs is not None else 'none'}")
    print(f"phy_rate_mbps: {lb.phy_rate_mbps:.2f}")
    print(f"mac_rate_mbps: {lb.mac_rate_mbps:.2f}")
    return 0


def _require_valid(s: Scenario) -> None:
    findings = validate_scenario(s)
    if has_errors(findings):
        codes = ", ".join(f.code for f in findings if f.severity == "error")
        raise SeameshError("REJECTED_SCENARIO", f"scenario has validation errors: {codes}")


def _cmd_coverage(args) -> int:
    s = _load(args.scenario)
    _require_valid(s)
    grid = coverage_grid(s, args.resolution)
    doc = coverage_to_dict(grid)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")
    covered = sum(1 for c in grid.cells if c.serving_node is not None)
    print(f"cells: {len(grid.cells)} covered: {covered} uncovered: {len(grid.cells) - covered}")
    print(f"wrote {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    s = _load(args.scenario)
    if args.duration is not None or args.seed is not None or args.dt is not None:
        from dataclasses import replace
        p = s.sim_params
        p = replace(
            p,
            duration_s=args.duration if args.duration is not None else p.duration_s,
            seed=args.seed if args.seed is not None else p.seed,
            dt_s=args.dt if args.dt is not None else p.dt_s,
        )
        s = replace(s, sim_params=p)
    terminals = ()
    if args.terminals:
        with open(args.terminals, "r", encoding="utf-8") as fh:
            terminals = tuple(terminal_track_from_dict(d) for d in json.load(fh))
    count = simulate_to_jsonl(s, terminals, args.out)
    print(f"records: {count}")
    print(f"wrote {args.out}")
    return 0


def _cmd_cost(args) -> int:
    s = _load(args.scenario)
    report = estimate_cost(s)
    if args.json:
        print(json.dumps({
            "items": [it.__dict__ for it in report.items],
            "total_cents": report.total_cents,
            "total_usd": cents_to_usd(report.total_cents),
        }, indent=2))
        return 0
    for it in report.items:
        print(f"{it.label} x{it.count} @ {cents_to_usd(it.unit_cents)} = {cents_to_usd(it.subtotal_cents)}")
    print(f"total {cents_to_usd(report.total_cents)}")
    return 0


def _cmd_example(args) -> int:
    save_scenario(build_redsea_scenario(), args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seamesh",
        description="Maritime 802.11ax mesh planning: validation, link budgets, coverage, simulation, cost.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check deployment rules")
    p.add_argument("scenario")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("linkbudget", help="directional link budget between two nodes")
    p.add_argument("scenario")
    p.add_argument("--from", required=True, dest="from", metavar="NODE_ID")
    p.add_argument("--to", required=True, metavar="NODE_ID")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_linkbudget)

    p = sub.add_parser("coverage", help="compute a coverage grid document")
    p.add_argument("scenario")
    p.add_argument("--resolution", type=float, default=25.0, metavar="M")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("simulate", help="run the time-stepped simulation to a metrics log")
    p.add_argument("scenario")
    p.add_argument("--duration", type=float, default=None, metavar="S")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--dt", type=float, default=None, metavar="S")
    p.add_argument("--terminals", default=None, help="JSON file with terminal tracks")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("cost", help="deployment bill of materials")
    p.add_argument("scenario")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_cost)

    p = sub.add_parser("example", help="write the bundled calibration scenario")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_example)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SeameshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
