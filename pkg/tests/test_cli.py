import json
import subprocess
import sys

import pytest

from wptsheet.model import SheetSpec, canonical_json, spec_to_dict


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "wptsheet", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture
def spec_file(tmp_path):
    p = tmp_path / "spec.json"
    p.write_text(canonical_json(spec_to_dict(SheetSpec())))
    return p


@pytest.fixture
def cuts_file(tmp_path):
    p = tmp_path / "cuts.json"
    p.write_text(json.dumps({"cuts": [[[55, -101], [55, 101]]]}))
    return p


def test_gen(tmp_path, spec_file):
    out = run_cli("gen", "--spec", str(spec_file), "--out-dir", str(tmp_path / "g"))
    assert out.returncode == 0, out.stderr
    info = json.loads(out.stdout)
    assert info["coils"] == 16
    assert (tmp_path / "g" / "sheet.stl").exists()
    assert (tmp_path / "g" / "layer_coil.svg").exists()
    assert (tmp_path / "g" / "routing_tree.json").exists()


def test_gen_round_trip_spec_is_byte_identical(tmp_path, spec_file):
    run_cli("gen", "--spec", str(spec_file), "--out-dir", str(tmp_path / "g"),
            "--format", "json")
    assert (tmp_path / "g" / "spec.json").read_bytes() == spec_file.read_bytes()


def test_cut(tmp_path, spec_file, cuts_file):
    out = run_cli("cut", "--spec", str(spec_file), "--scenario", str(cuts_file),
                  "--out-dir", str(tmp_path / "c"))
    assert out.returncode == 0, out.stderr
    assert json.loads(out.stdout)["surviving"] == 12
    report = json.loads((tmp_path / "c" / "cut_report.json").read_text())
    assert len(report["report"]["surviving_coils"]) == 12


def test_analyze(tmp_path, spec_file):
    out = run_cli("analyze", "--spec", str(spec_file), "--out-dir", str(tmp_path / "a"))
    assert out.returncode == 0, out.stderr
    summary = json.loads(out.stdout)
    assert summary["q_factor"] == pytest.approx(57.5, abs=1e-6)
    analysis = json.loads((tmp_path / "a" / "analysis.json").read_text())
    assert analysis["feasible_window_mm"] == [0.36, 1.92]


def test_sweep(tmp_path, spec_file):
    out = run_cli("sweep", "--spec", str(spec_file), "--out-dir", str(tmp_path / "s"))
    assert out.returncode == 0, out.stderr
    assert json.loads(out.stdout)["selected_thickness_mm"] == 1.44
    assert (tmp_path / "s" / "sweep.csv").exists()
    assert (tmp_path / "s" / "q_vs_thickness.csv").read_text().startswith("thickness_mm,q_factor")


def test_sim_and_export(tmp_path, spec_file, cuts_file):
    rx = tmp_path / "rx.json"
    rx.write_text(json.dumps({"path": [[0, -100, -100], [10, 100, 100]], "height": 3.0}))
    out = run_cli("sim", "--spec", str(spec_file), "--scenario", str(cuts_file),
                  "--rx", str(rx), "--out-dir", str(tmp_path / "m"), "--dt", "0.5")
    assert out.returncode == 0, out.stderr
    trace = (tmp_path / "m" / "trace.ndjson").read_text()
    assert all(set(json.loads(l)) == {"t", "kind", "coil", "value"}
               for l in trace.splitlines())
    assert (tmp_path / "m" / "coverage.csv").exists()

    out = run_cli("export", "--spec", str(spec_file), "--scenario", str(cuts_file),
                  "--out-dir", str(tmp_path / "e"))
    assert out.returncode == 0, out.stderr
    assert json.loads(out.stdout)["surviving"] == 12
    assert (tmp_path / "e" / "sheet.stl").exists()
    assert (tmp_path / "e" / "sealing_manifest.json").exists()


def test_malformed_spec_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = run_cli("gen", "--spec", str(bad), "--out-dir", str(tmp_path / "g"))
    assert out.returncode == 2
    err = json.loads(out.stderr.splitlines()[-1])
    assert err["error"] == "input"


def test_invalid_spec_exit_2(tmp_path):
    p = tmp_path / "thin.json"
    d = spec_to_dict(SheetSpec())
    d["coil"]["xsec"]["thickness"] = 0.1
    p.write_text(json.dumps(d))
    out = run_cli("analyze", "--spec", str(p), "--out-dir", str(tmp_path / "a"))
    assert out.returncode == 2
    assert "0.24" in out.stderr


def test_infeasible_sweep_exit_1(tmp_path):
    p = tmp_path / "narrow.json"
    d = spec_to_dict(SheetSpec())
    d["coil"]["xsec"]["width"] = 0.1  # entry pressure above p_max at every t
    p.write_text(json.dumps(d))
    out = run_cli("sweep", "--spec", str(p), "--out-dir", str(tmp_path / "s"))
    assert out.returncode == 1
    err = json.loads(out.stderr.splitlines()[-1])
    assert err["error"] == "domain"


def test_calibrate_command(tmp_path):
    out = run_cli("calibrate", "--out", str(tmp_path / "cal.json"))
    assert out.returncode == 0, out.stderr
    cal = json.loads((tmp_path / "cal.json").read_text())
    assert set(cal) >= {"loss_calibration", "tan_delta_eff", "c_mech",
                        "p_max_inject", "c_leak"}
