"""HTTP service (/v1): scenario store, coverage, cost, async simulation runs.

Coverage and cost answer synchronously (they are the planner UI's inner
loop); simulations run on worker threads behind a RunHandle. The store is
in-memory with a per-scenario revision counter for optimistic locking.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import replace

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .engine import (
    metrics_header,
    record_to_dict,
    run_simulation,
    terminal_track_from_dict,
)
from .errors import SeameshError
from .mesh import coverage_grid, coverage_to_dict
from .model import (
    Scenario,
    cents_to_usd,
    estimate_cost,
    has_errors,
    scenario_from_dict,
    scenario_to_dict,
    validate_scenario,
)

API_SCHEMA = "seamesh-api/1"
DEFAULT_PAGE_SIZE = 1000


class _Run:
    def __init__(self, run_id: str, scenario_id: str):
        self.id = run_id
        self.scenario_id = scenario_id
        self.status = "pending"
        self.progress = 0.0
        self.error: str | None = None
        self.records: list[dict] = []
        self.header: dict | None = None
        self.lock = threading.Lock()

    def handle(self) -> dict:
        with self.lock:
            return {
                "schema": API_SCHEMA,
                "id": self.id,
                "status": self.status,
                "progress": self.progress,
                "error": self.error,
            }


class Store:
    """Scenario documents and runs; all access under one lock (desk-scale)."""

    def __init__(self):
        self.lock = threading.Lock()
        self.scenarios: dict[str, Scenario] = {}
        self.revisions: dict[str, int] = {}
        self.runs: dict[str, _Run] = {}

    def active_runs(self, scenario_id: str) -> bool:
        return any(
            r.scenario_id == scenario_id and r.status in ("pending", "running")
            for r in self.runs.values()
        )


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"schema": API_SCHEMA, "code": code, "message": message})


def _parse_scenario(body: dict) -> tuple[Scenario, list]:
    """Parse and validate; raises SeameshError(MALFORMED_SCENARIO) on shape
    problems. Returns the scenario and its findings (may contain errors)."""
    if not isinstance(body, dict):
        raise SeameshError("MALFORMED_SCENARIO", "request body must be a JSON object")
    body = {k: v for k, v in body.items() if k != "revision"}
    try:
        s = scenario_from_dict(body)
    except (KeyError, TypeError, ValueError) as exc:
        raise SeameshError("MALFORMED_SCENARIO", f"cannot parse scenario: {exc}")
    return s, validate_scenario(s)


def create_app(store: Store | None = None) -> FastAPI:
    app = FastAPI(title="seamesh", version="1")
    # the planner UI is served as static files, usually from another origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    st = store if store is not None else Store()
    app.state.store = st

    @app.exception_handler(SeameshError)
    async def _seamesh_error(_req: Request, exc: SeameshError):
        status = {
            "MALFORMED_SCENARIO": 400,
            "REJECTED_SCENARIO": 422,
            "MISSING_PRICE": 422,
            "EMPTY_GRID": 422,
        }.get(exc.code, 400)
        return _error_response(status, exc.code, exc.args[0])

    async def _body_json(request: Request) -> dict:
        try:
            return json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise SeameshError("MALFORMED_SCENARIO", f"invalid JSON: {exc}")

    @app.post("/v1/scenarios", status_code=201)
    async def post_scenario(request: Request):
        body = await _body_json(request)
        s, findings = _parse_scenario(body)
        if has_errors(findings):
            return JSONResponse(status_code=422, content={
                "schema": API_SCHEMA,
                "code": "REJECTED_SCENARIO",
                "findings": [f.__dict__ for f in findings],
            })
        sid = uuid.uuid4().hex[:12]
        with st.lock:
            st.scenarios[sid] = s
            st.revisions[sid] = 1
        return {
            "schema": API_SCHEMA,
            "id": sid,
            "revision": 1,
            "findings": [f.__dict__ for f in findings],
        }

    @app.get("/v1/scenarios/{sid}")
    async def get_scenario(sid: str):
        with st.lock:
            s = st.scenarios.get(sid)
            rev = st.revisions.get(sid)
        if s is None:
            return _error_response(404, "UNKNOWN_SCENARIO", f"no scenario {sid!r}")
        return {"schema": API_SCHEMA, "id": sid, "revision": rev, "scenario": scenario_to_dict(s)}

    @app.put("/v1/scenarios/{sid}")
    async def put_scenario(sid: str, request: Request):
        body = await _body_json(request)
        claimed_rev = body.get("revision") if isinstance(body, dict) else None
        s, findings = _parse_scenario(body)
        if has_errors(findings):
            return JSONResponse(status_code=422, content={
                "schema": API_SCHEMA,
                "code": "REJECTED_SCENARIO",
                "findings": [f.__dict__ for f in findings],
            })
        with st.lock:
            if sid not in st.scenarios:
                return _error_response(404, "UNKNOWN_SCENARIO", f"no scenario {sid!r}")
            if st.active_runs(sid):
                return _error_response(409, "SCENARIO_BUSY", "scenario has active simulation runs")
            if claimed_rev is not None and claimed_rev != st.revisions[sid]:
                return _error_response(
                    409, "STALE_REVISION",
                    f"revision {claimed_rev} does not match current {st.revisions[sid]}")
            st.scenarios[sid] = s
            st.revisions[sid] += 1
            rev = st.revisions[sid]
        return {
            "schema": API_SCHEMA,
            "id": sid,
            "revision": rev,
            "findings": [f.__dict__ for f in findings],
        }

    @app.get("/v1/scenarios/{sid}/coverage")
    async def get_coverage(sid: str, resolution: float = Query(25.0, gt=0)):
        with st.lock:
            s = st.scenarios.get(sid)
        if s is None:
            return _error_response(404, "UNKNOWN_SCENARIO", f"no scenario {sid!r}")
        return coverage_to_dict(coverage_grid(s, resolution))

    @app.get("/v1/scenarios/{sid}/cost")
    async def get_cost(sid: str):
        with st.lock:
            s = st.scenarios.get(sid)
        if s is None:
            return _error_response(404, "UNKNOWN_SCENARIO", f"no scenario {sid!r}")
        report = estimate_cost(s)
        return {
            "schema": "seamesh-cost/1",
            "items": [it.__dict__ for it in report.items],
            "total_cents": report.total_cents,
            "total_usd": cents_to_usd(report.total_cents),
        }

    @app.post("/v1/scenarios/{sid}/simulate", status_code=202)
    async def post_simulate(sid: str, request: Request):
        body = await _body_json(request)
        with st.lock:
            s = st.scenarios.get(sid)
        if s is None:
            return _error_response(404, "UNKNOWN_SCENARIO", f"no scenario {sid!r}")
        try:
            p = s.sim_params
            if "duration_s" in body:
                p = replace(p, duration_s=float(body["duration_s"]))
            if "seed" in body:
                p = replace(p, seed=int(body["seed"]))
            if "dt_s" in body:
                p = replace(p, dt_s=float(body["dt_s"]))
            terminals = tuple(terminal_track_from_dict(d) for d in body.get("terminals", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise SeameshError("MALFORMED_SCENARIO", f"bad simulate request: {exc}")
        sim_scenario = replace(s, sim_params=p)

        run = _Run(uuid.uuid4().hex[:12], sid)
        with st.lock:
            st.runs[run.id] = run

        def work():
            with run.lock:
                run.status = "running"
                run.header = metrics_header(sim_scenario)
            try:
                duration = max(sim_scenario.sim_params.duration_s, 1e-9)
                for rec in run_simulation(sim_scenario, terminals):
                    with run.lock:
                        run.records.append(record_to_dict(rec))
                        run.progress = min(rec.t_s / duration, 1.0)
                with run.lock:
                    run.status = "done"
                    run.progress = 1.0
            except Exception as exc:  # surfaced through the handle
                with run.lock:
                    run.status = "failed"
                    run.error = str(exc)

        threading.Thread(target=work, daemon=True).start()
        return run.handle()

    @app.get("/v1/runs/{rid}")
    async def get_run(rid: str):
        with st.lock:
            run = st.runs.get(rid)
        if run is None:
            return _error_response(404, "UNKNOWN_RUN", f"no run {rid!r}")
        return run.handle()

    @app.get("/v1/runs/{rid}/metrics")
    async def get_metrics(rid: str, from_t: float = Query(0.0), limit: int = Query(DEFAULT_PAGE_SIZE, gt=0)):
        with st.lock:
            run = st.runs.get(rid)
        if run is None:
            return _error_response(404, "UNKNOWN_RUN", f"no run {rid!r}")
        with run.lock:
            header = run.header
            page = [r for r in run.records if r["t"] >= from_t][: limit + 1]
        next_from_t = None
        if len(page) > limit:
            next_from_t = page[limit]["t"]
            page = page[:limit]
        return {
            "schema": "seamesh-metrics/1",
            "header": header,
            "records": page,
            "next_from_t": next_from_t,
        }

    return app


app = create_app()
