"""Local JSON-over-HTTP service backing the interactive designer UI.

State is one immutable snapshot (spec, scenario, derived tree and cut report)
swapped atomically under a lock, so readers never observe a half-updated
sheet. All payloads are the module JSON formats; nothing here computes
physics.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass

from fastapi import Body, FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import em, mech, protocol
from .calibration import Calibration, default_calibration
from .cuts import CutScenario, apply_cuts, scenario_from_dict, scenario_to_dict, \
    sealing_manifest
from .errors import DomainError, ValidationError
from .exporters import svg_layer
from .htree import tree_for_spec, tree_to_dict
from .model import SheetSpec, spec_from_dict, spec_to_dict, validate_sheet
from .sweep import select_design, sweep_thickness


@dataclass(frozen=True)
class _Snapshot:
    spec: SheetSpec
    violations: tuple
    tree: object
    scenario: CutScenario
    report: object


def _snapshot(spec: SheetSpec, scenario: CutScenario, cal: Calibration) -> _Snapshot:
    violations = tuple(validate_sheet(spec))
    tree = None
    report = None
    if not violations:
        tree = tree_for_spec(spec)
        report = apply_cuts(spec, tree, scenario, cal)
    return _Snapshot(spec=spec, violations=violations, tree=tree,
                     scenario=scenario, report=report)


def create_app(initial_spec: SheetSpec | None = None,
               cal: Calibration | None = None,
               static_dir: str | None = None) -> FastAPI:
    cal = cal or default_calibration()
    app = FastAPI(title="wptsheet service")
    lock = threading.Lock()
    state = {"snap": _snapshot(initial_spec or SheetSpec(), CutScenario(), cal)}

    def snap() -> _Snapshot:
        with lock:
            return state["snap"]

    def replace(new_snap: _Snapshot):
        with lock:
            state["snap"] = new_snap

    @app.exception_handler(ValidationError)
    async def _validation_handler(_req, exc):
        return JSONResponse(status_code=400, content={"error": "validation", "detail": str(exc)})

    @app.exception_handler(DomainError)
    async def _domain_handler(_req, exc):
        return JSONResponse(status_code=409, content={"error": "domain", "detail": str(exc)})

    @app.get("/spec")
    def get_spec():
        s = snap()
        return {"spec": spec_to_dict(s.spec), "violations": list(s.violations)}

    @app.put("/spec")
    def put_spec(body: dict = Body(...)):
        spec = spec_from_dict(body)
        new_snap = _snapshot(spec, CutScenario(), cal)
        replace(new_snap)
        return {"spec": spec_to_dict(spec), "violations": list(new_snap.violations)}

    @app.post("/cut")
    def post_cut(body: dict = Body(...)):
        s = snap()
        _require_valid(s)
        scenario = scenario_from_dict(body)
        new_snap = _snapshot(s.spec, scenario, cal)
        replace(new_snap)
        report = new_snap.report
        manifest = sealing_manifest(new_snap.spec, new_snap.tree, scenario, report)
        return {"report": report.to_dict(), "sealing_manifest": manifest,
                "scenario": scenario_to_dict(scenario)}

    @app.post("/sim/step")
    def sim_step(body: dict = Body(...)):
        s = snap()
        _require_valid(s)
        if not isinstance(body, dict) or "x_mm" not in body or "y_mm" not in body:
            raise ValidationError('sim step body needs "x_mm" and "y_mm"')
        rx = None
        if "height_mm" in body:
            rx = protocol.make_rx(s.spec, path=((0.0, 0.0, 0.0),),
                                  height=float(body["height_mm"]), cal=cal)
        policy = protocol.make_policy(s.spec, k_max=int(body.get("k_max", 1)))
        return protocol.instantaneous_state(
            s.spec, s.report, (float(body["x_mm"]), float(body["y_mm"])),
            rx=rx, policy=policy, cal=cal)

    @app.get("/analysis")
    def analysis():
        s = snap()
        if s.violations:
            return JSONResponse(status_code=409, content={
                "error": "invalid_spec", "violations": list(s.violations)})
        electrical = em.q_factor(s.spec.coil, s.spec.materials, s.spec.frequency, cal)
        mechanical = mech.mech_report(s.spec, None, cal)
        window = mech.feasible_window(s.spec, cal)
        return {
            "electrical": electrical.to_dict(),
            "mech": mechanical.to_dict(),
            "feasible_window_mm": list(window) if window else None,
        }

    @app.get("/geometry")
    def geometry():
        s = snap()
        _require_valid(s)
        n = s.spec.grid_size
        coils = []
        for r in range(n):
            for c in range(n):
                x, y = s.spec.coil_center_mm(r, c)
                coils.append({"coil": [r, c], "center_mm": [x, y],
                              "outer_side_mm": s.spec.coil.outer_side})
        return {
            "sheet_half_mm": s.spec.half_extent_um() / 1000.0,
            "pitch_mm": s.spec.pitch,
            "coils": coils,
            "tree": tree_to_dict(s.tree),
            "report": s.report.to_dict(),
            "scenario": scenario_to_dict(s.scenario),
            "layers": {role: svg_layer(s.spec, s.tree, role, s.report)
                       for role in s.spec.layers},
        }

    @app.get("/sweep")
    def sweep():
        s = snap()
        _require_valid(s)
        rows = sweep_thickness(s.spec, cal=cal)
        sel = select_design(rows)
        return {"rows": [r.to_dict() for r in rows], "selection": sel.to_dict()}

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def _require_valid(s: _Snapshot):
    if s.violations:
        raise DomainError("current spec is invalid: " + "; ".join(s.violations))
