"""Command-line interface.

Exit codes: 0 ok, 1 domain error, 2 input error. Errors also go to stderr as
one machine-readable JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import em, mech, protocol
from .calibration import load_calibration, save_calibration
from .cuts import CutScenario, apply_cuts, load_scenario, sealing_manifest
from .errors import DomainError, ValidationError
from .exporters import export_geometry
from .htree import tree_for_spec
from .model import DEFAULT_T_GRID, SheetSpec, canonical_json, load_spec, \
    save_spec, spec_to_dict, validate_sheet, sheet_warnings
from .sweep import calibrate, q_curve_csv, rows_to_csv, select_design, sweep_thickness

ALL_FORMATS = ("json", "csv", "svg", "stl", "ndjson")


def _parser():
    p = argparse.ArgumentParser(prog="wptsheet",
                                description="Design and simulate cuttable liquid-metal "
                                            "wireless-power sheets")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec=True, scenario=False, out=True):
        if spec:
            sp.add_argument("--spec", help="sheet spec JSON (defaults to the built-in sheet)")
        if scenario:
            sp.add_argument("--scenario", help="cut scenario JSON")
        if out:
            sp.add_argument("--out-dir", default=".", help="output directory")
        sp.add_argument("--calibration", help="calibration JSON (defaults to the shipped one)")
        sp.add_argument("--format", choices=ALL_FORMATS, action="append",
                        help="restrict outputs (repeatable)")

    common(sub.add_parser("gen", help="generate routing and fabrication geometry"))
    common(sub.add_parser("cut", help="apply a cut scenario"), scenario=True)
    common(sub.add_parser("analyze", help="electrical + mechanical report"))
    sp = sub.add_parser("sim", help="run the detection/switching simulation")
    common(sp, scenario=True)
    sp.add_argument("--rx", required=True, help="rx device JSON ({path: [[t,x,y],...], ...})")
    sp.add_argument("--dt", type=float, default=0.1, help="time step, s")
    sp.add_argument("--coverage-step", type=float, default=25.0,
                    help="coverage map grid step, mm")
    sp = sub.add_parser("sweep", help="thickness sweep and design selection")
    common(sp)
    sp.add_argument("--grid", help="comma-separated thickness grid, mm")
    common(sub.add_parser("export", help="re-emit geometry for a post-cut sheet"),
           scenario=True)
    sp = sub.add_parser("calibrate", help="regenerate the calibration record")
    sp.add_argument("--out", default="calibration.json")
    sp = sub.add_parser("serve", help="run the local JSON/HTTP service")
    sp.add_argument("--spec")
    sp.add_argument("--calibration")
    sp.add_argument("--port", type=int, default=8787)
    sp.add_argument("--host", default="127.0.0.1")
    return p


def _load_inputs(args, need_scenario=False):
    spec = load_spec(args.spec) if getattr(args, "spec", None) else SheetSpec()
    violations = validate_sheet(spec)
    if violations:
        raise ValidationError("invalid spec: " + "; ".join(violations))
    for w in sheet_warnings(spec):
        print(f"warning: {w}", file=sys.stderr)
    cal = load_calibration(getattr(args, "calibration", None))
    scenario = CutScenario()
    if getattr(args, "scenario", None):
        scenario = load_scenario(args.scenario)
    elif need_scenario:
        raise ValidationError("--scenario is required")
    return spec, cal, scenario


def _formats(args):
    return tuple(args.format) if getattr(args, "format", None) else ALL_FORMATS


def _write(out_dir, name, text):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as f:
        f.write(text)
    return path


def cmd_gen(args):
    spec, cal, _ = _load_inputs(args)
    tree = tree_for_spec(spec)
    fmts = [f for f in _formats(args) if f in ("json", "svg", "stl")]
    written = export_geometry(spec, tree, args.out_dir, formats=fmts)
    if "json" in fmts:
        _write(args.out_dir, "spec.json", canonical_json(spec_to_dict(spec)))
        written.append("spec.json")
    print(json.dumps({"written": written, "coils": spec.grid_size ** 2}))


def cmd_cut(args):
    spec, cal, scenario = _load_inputs(args, need_scenario=True)
    tree = tree_for_spec(spec)
    report = apply_cuts(spec, tree, scenario, cal)
    manifest = sealing_manifest(spec, tree, scenario, report)
    out = {"report": report.to_dict(), "sealing_manifest": manifest}
    if "json" in _formats(args):
        _write(args.out_dir, "cut_report.json", json.dumps(out, sort_keys=True, indent=2) + "\n")
    print(json.dumps({"surviving": len(report.surviving_coils),
                      "severed_segments": len(report.severed_segments),
                      "leak_risk": report.leak_risk,
                      "root_severed": report.root_severed}))


def cmd_analyze(args):
    spec, cal, _ = _load_inputs(args)
    electrical = em.q_factor(spec.coil, spec.materials, spec.frequency, cal)
    mechanical = mech.mech_report(spec, None, cal)
    window = mech.feasible_window(spec, cal)
    out = {
        "electrical": electrical.to_dict(),
        "mech": mechanical.to_dict(),
        "feasible_window_mm": list(window) if window else None,
        "durability": mech.durability_report(spec, 100, cal),
    }
    if "json" in _formats(args):
        _write(args.out_dir, "analysis.json", json.dumps(out, sort_keys=True, indent=2) + "\n")
    print(json.dumps({"q_factor": electrical.q_factor,
                      "feasible": mechanical.feasible,
                      "leak_on_cut": mechanical.leak_on_cut}))


def cmd_sim(args):
    spec, cal, scenario = _load_inputs(args)
    tree = tree_for_spec(spec)
    report = apply_cuts(spec, tree, scenario, cal)
    try:
        with open(args.rx) as f:
            rx = protocol.rx_from_dict(spec, json.load(f), cal)
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed rx JSON: {e}") from e
    trace = protocol.run_sim(spec, tree, report, rx, dt=args.dt, cal=cal)
    fmts = _formats(args)
    if "ndjson" in fmts:
        _write(args.out_dir, "trace.ndjson", trace.to_ndjson())
    cov = protocol.coverage_map(spec, tree, report, rx, grid_step=args.coverage_step, cal=cal)
    if "csv" in fmts:
        _write(args.out_dir, "coverage.csv", cov.to_csv())
    if "json" in fmts:
        _write(args.out_dir, "coverage.json", json.dumps(cov.to_dict(), sort_keys=True) + "\n")
    print(json.dumps({"events": len(trace.events),
                      "max_power": cov.max_value()[0]}))


def cmd_sweep(args):
    spec, cal, _ = _load_inputs(args)
    grid = None
    if args.grid:
        try:
            grid = tuple(float(t) for t in args.grid.split(","))
        except ValueError as e:
            raise ValidationError(f"bad --grid: {e}") from e
    rows = sweep_thickness(spec, grid or DEFAULT_T_GRID, cal)
    sel = select_design(rows)
    fmts = _formats(args)
    if "csv" in fmts:
        _write(args.out_dir, "sweep.csv", rows_to_csv(rows))
        _write(args.out_dir, "q_vs_thickness.csv", q_curve_csv(rows))
    if "json" in fmts:
        _write(args.out_dir, "sweep.json", json.dumps(
            {"rows": [r.to_dict() for r in rows], "selection": sel.to_dict()},
            sort_keys=True, indent=2) + "\n")
    print(json.dumps({"selected_thickness_mm": sel.thickness,
                      "selected_sheet_mm": sel.sheet_thickness}))


def cmd_export(args):
    spec, cal, scenario = _load_inputs(args, need_scenario=True)
    tree = tree_for_spec(spec)
    report = apply_cuts(spec, tree, scenario, cal)
    manifest = sealing_manifest(spec, tree, scenario, report)
    fmts = [f for f in _formats(args) if f in ("json", "svg", "stl")]
    written = export_geometry(spec, tree, args.out_dir, report=report,
                              scenario=scenario, formats=fmts)
    if "json" in fmts:
        _write(args.out_dir, "sealing_manifest.json",
               json.dumps(manifest, sort_keys=True, indent=2) + "\n")
        written.append("sealing_manifest.json")
    print(json.dumps({"written": written, "surviving": len(report.surviving_coils)}))


def cmd_calibrate(args):
    cal = calibrate()
    save_calibration(cal, args.out)
    print(json.dumps({"written": args.out,
                      "loss_calibration": cal.loss_calibration,
                      "tan_delta_eff": cal.tan_delta_eff}))


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    spec = load_spec(args.spec) if args.spec else SheetSpec()
    cal = load_calibration(args.calibration)
    static = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(
        os.path.abspath(__file__)))), "frontend", "dist")
    app = create_app(spec, cal, static_dir=static if os.path.isdir(static) else None)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


_HANDLERS = {
    "gen": cmd_gen, "cut": cmd_cut, "analyze": cmd_analyze, "sim": cmd_sim,
    "sweep": cmd_sweep, "export": cmd_export, "calibrate": cmd_calibrate,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        _HANDLERS[args.command](args)
        return 0
    except ValidationError as e:
        print(json.dumps({"error": "input", "detail": str(e)}), file=sys.stderr)
        return 2
    except DomainError as e:
        print(json.dumps({"error": "domain", "detail": str(e)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
