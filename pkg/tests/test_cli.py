import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from frontlab.cli import main, write_csv

ROOT = Path(__file__).resolve().parents[1]
SCEN = ROOT / "scenarios"


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_simulate_uniform_writes_eleven_snapshots(tmp_path):
    r = run("simulate", "--config", str(SCEN / "uniform01_kpp1.json"), "--out", str(tmp_path))
    assert r.exit_code == 0, r.output
    snaps = sorted(tmp_path.glob("snapshot_*.csv"))
    assert len(snaps) == 11
    front = (tmp_path / "front.csv").read_text().splitlines()
    assert front[0] == "t,x_half" and len(front) > 11


def test_simulate_zero_time_returns_initial_datum(tmp_path):
    cfg = json.loads((SCEN / "delta1_kpp1_simulate.json").read_text())
    cfg["simulate"]["T"] = 0.0
    p = tmp_path / "s.json"
    p.write_text(json.dumps(cfg))
    r = run("simulate", "--config", str(p), "--out", str(tmp_path / "o"))
    assert r.exit_code == 0
    rows = (tmp_path / "o" / "snapshot_0.csv").read_text().splitlines()[1:]
    vals = [float(line.split(",")[1]) for line in rows]
    xs = [float(line.split(",")[0]) for line in rows]
    assert vals == [1.0 if x > 0 else 0.0 for x in xs]


def test_outputs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run("simulate", "--config", str(SCEN / "delta1_kpp1_simulate.json"),
                   "--out", str(out)).exit_code == 0
    for f in a.iterdir():
        assert f.read_bytes() == (b / f.name).read_bytes()


def test_csv_format(tmp_path):
    write_csv(tmp_path / "t.csv", ["a", "b"], [[0.1, 1.0], [1 / 3, 2.0]])
    raw = (tmp_path / "t.csv").read_bytes()
    assert b"\r" not in raw
    assert raw.decode().splitlines() == ["a,b", "0.10000000000000001,0.33333333333333331", "1,2"]


def test_wave_below_critical_exits_one(tmp_path):
    r = run("wave", "--config", str(SCEN / "two_atom_below_cstar.json"), "--out", str(tmp_path))
    assert r.exit_code == 1
    meta = json.loads((tmp_path / "wave.json").read_text())
    assert meta["converged"] is False and meta["reason"] == "escaped"


def test_wave_standing_profile(tmp_path):
    r = run("wave", "--config", str(SCEN / "delta1_extension_standing.json"), "--out", str(tmp_path))
    assert r.exit_code == 0
    assert (tmp_path / "profile.csv").exists()


def test_speed_certificate_error_for_symmetric_measure(tmp_path):
    r = run("speed", "--config", str(SCEN / "symmetric_certificate.json"), "--out", str(tmp_path))
    assert r.exit_code == 0
    rep = json.loads((tmp_path / "speed.json").read_text())
    assert rep["certificate"] is None
    assert rep["errors"]["certificate"] == "mean displacement not positive"
    assert rep["c_dispersion"] == pytest.approx(1.509, abs=1e-3)
    assert (tmp_path / "lambda_scan.csv").read_text().startswith("lambda,c_lambda,upper_lambda\n")


def test_invariants_jobs_and_exit_codes(tmp_path):
    r = run("invariants", "--config", str(SCEN / "invariants_oversized_dt.json"),
            "--config", str(SCEN / "invariants_zero_reaction.json"),
            "--out", str(tmp_path), "--jobs", "2")
    assert r.exit_code == 2
    bad = json.loads((tmp_path / "invariants_oversized_dt" / "invariants.json").read_text())
    guard = [s for s in bad["suites"] if s["name"] == "stability_guard"][0]
    assert not guard["passed"]
    ok = json.loads((tmp_path / "invariants_zero_reaction" / "invariants.json").read_text())
    mono = [s for s in ok["suites"] if s["name"] == "monostability"][0]
    assert ok["passed"] and mono["skipped"] and "not strictly positive" in mono["reason"]


def test_default_invariants_pass(tmp_path):
    r = run("invariants", "--config", str(SCEN / "two_atom_kpp1.json"), "--out", str(tmp_path))
    assert r.exit_code == 0
    rep = json.loads((tmp_path / "invariants.json").read_text())
    assert rep["passed"] and rep["seed"] == 42


@pytest.mark.parametrize(
    "patch",
    [{"grid": {"x_min": 0, "x_max": 1}}, {"nonlinearity": {"kind": "nope"}}, {"bogus_block": 1},
     {"semiflow": {"dt": 0.4}}],
)
def test_config_errors_exit_three(tmp_path, patch):
    cfg = json.loads((SCEN / "delta1_kpp1_simulate.json").read_text())
    cfg.update(patch)
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(cfg))
    r = run("simulate", "--config", str(p), "--out", str(tmp_path / "o"))
    assert r.exit_code == 3
    err = json.loads((tmp_path / "o" / "error.json").read_text())
    assert err["exit_code"] == 3


def test_simulation_width_check(tmp_path):
    cfg = json.loads((SCEN / "delta1_kpp1_simulate.json").read_text())
    cfg["simulate"]["T"] = 50.0
    p = tmp_path / "wide.json"
    p.write_text(json.dumps(cfg))
    assert run("simulate", "--config", str(p), "--out", str(tmp_path / "o")).exit_code == 3
