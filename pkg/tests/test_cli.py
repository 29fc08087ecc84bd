"""Command-line interface: config runs, exit codes, determinism."""

import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from concmeter import cli


def run_cli(*argv, env=None):
    full_env = dict(os.environ)
    full_env.pop("CONCMETER_SEED", None)
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "concmeter.cli", *argv],
                          capture_output=True, text=True, env=full_env)


def write_config(tmp_path, payload):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(payload))
    return path


GOOD_CONFIG = {
    "seed": 3,
    "jobs": [
        {"id": "floor", "check": "cube_floor", "n": 2, "N": 20000,
         "eps": {"start": 0.1, "stop": 0.9, "num": 5}},
        {"id": "embed", "check": "sup_embedding", "n": 4, "d": 1.0,
         "N": 20000, "eps": [0.3, 0.6]},
    ],
}


def test_run_writes_reports_and_summary(tmp_path):
    cfg = write_config(tmp_path, GOOD_CONFIG)
    out = tmp_path / "out"
    res = run_cli("run", str(cfg), "--out", str(out), "--jobs", "1")
    assert res.returncode == 0, res.stderr
    assert (out / "floor.json").exists() and (out / "embed.json").exists()
    summary = (out / "summary.csv").read_text().splitlines()
    assert summary[0].startswith("job_id,check_id,verdict")
    assert len(summary) == 3
    payload = json.loads((out / "floor.json").read_text())
    assert payload["verdict"] == "pass"
    assert payload["job"]["resolved"]["seed"] == 3


def test_run_empty_job_list(tmp_path):
    cfg = write_config(tmp_path, {"jobs": []})
    out = tmp_path / "out"
    res = run_cli("run", str(cfg), "--out", str(out))
    assert res.returncode == 0
    assert (out / "summary.csv").read_text().splitlines()[0].startswith("job_id")


def test_run_rejects_unknown_keys(tmp_path):
    cfg = write_config(tmp_path, {"jobs": [], "extra_key": 1})
    res = run_cli("run", str(cfg))
    assert res.returncode == 1
    assert "extra_key" in res.stderr

    cfg = write_config(tmp_path, {"jobs": [{"check": "cube_floor", "n": 2,
                                            "bogus": True}]})
    res = run_cli("run", str(cfg))
    assert res.returncode == 1
    assert "bogus" in res.stderr


def test_run_rejects_unknown_family(tmp_path):
    cfg = write_config(tmp_path, {"jobs": [
        {"check": "separated_sets", "n": 4, "measure": "weibull"}]})
    res = run_cli("run", str(cfg))
    assert res.returncode == 1
    assert "weibull" in res.stderr


def test_run_rejects_missing_required(tmp_path):
    cfg = write_config(tmp_path, {"jobs": [{"check": "radial_transfer", "n": 8}]})
    res = run_cli("run", str(cfg))
    assert res.returncode == 1
    assert "'p'" in res.stderr


def test_run_exit_2_on_failed_check(tmp_path):
    # a deliberately false profile (C ~ 0) makes the transfer bound fail
    cfg = write_config(tmp_path, {"jobs": [
        {"id": "doomed", "check": "norm_ratio_transfer", "n": 8, "K": "l2",
         "L": "l2", "measure": "haar_sphere", "N": 5000,
         "eps": [0.05, 0.1, 0.2],
         "profile": {"name": "custom", "C": 1e-9, "c": 0.25}}]})
    out = tmp_path / "out"
    res = run_cli("run", str(cfg), "--out", str(out))
    assert res.returncode == 2
    payload = json.loads((out / "doomed.json").read_text())
    assert payload["verdict"] == "fail"


def test_run_env_seed_override(tmp_path):
    cfg = write_config(tmp_path, {"seed": 3, "jobs": [
        {"id": "floor", "check": "cube_floor", "n": 2, "N": 5000,
         "eps": [0.2, 0.5]}]})
    out1, out2 = tmp_path / "e1", tmp_path / "e2"
    run_cli("run", str(cfg), "--out", str(out1))
    run_cli("run", str(cfg), "--out", str(out2), env={"CONCMETER_SEED": "77"})
    a = json.loads((out1 / "floor.json").read_text())
    b = json.loads((out2 / "floor.json").read_text())
    assert a["inputs"]["seed"] == 3 and b["inputs"]["seed"] == 77
    assert a["grid"]["lhs"] != b["grid"]["lhs"]


def test_run_deterministic_across_worker_counts(tmp_path):
    cfg = write_config(tmp_path, GOOD_CONFIG)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert run_cli("run", str(cfg), "--out", str(out1), "--jobs", "1").returncode == 0
    assert run_cli("run", str(cfg), "--out", str(out2), "--jobs", "2").returncode == 0
    for name in ("floor.json", "embed.json", "summary.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_alpha_csv_deterministic_and_monotone(tmp_path):
    out1 = tmp_path / "a1.csv"
    out2 = tmp_path / "a2.csv"
    args = ["alpha", "--measure", "haar_sphere", "--metric", "l2", "--n", "16",
            "--N", "20000", "--eps", "0.05:1.0:8", "--seed", "5"]
    assert run_cli(*args, "--out", str(out1)).returncode == 0
    assert run_cli(*args, "--out", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
    data = np.loadtxt(out1, delimiter=",", skiprows=2)
    assert np.all(np.diff(data[:, 1]) <= 1e-12)
    assert out1.read_text().startswith("# config:")


def test_alpha_empty_eps_usage_error(tmp_path):
    res = run_cli("alpha", "--measure", "haar_sphere", "--n", "8",
                  "--eps", "", "--out", str(tmp_path / "x.csv"))
    assert res.returncode == 1
    assert "eps" in res.stderr


def test_beta_identity_column(tmp_path):
    out = tmp_path / "b.csv"
    res = run_cli("beta", "--K", "l2", "--L", "l2", "--measure", "cone_surface",
                  "--p", "2", "--variant", "beta", "--n", "8,16",
                  "--N", "5000", "--out", str(out))
    assert res.returncode == 0, res.stderr
    rows = [line.split(",") for line in out.read_text().splitlines()[2:]]
    assert all(float(row[1]) == pytest.approx(1.0, abs=1e-9) for row in rows)


def test_median_command_seed_override():
    base = run_cli("median", "--measure", "uniform_ball", "--p", "2",
                   "--norm", "l2", "--n", "8", "--N", "5000")
    override = run_cli("median", "--measure", "uniform_ball", "--p", "2",
                       "--norm", "l2", "--n", "8", "--N", "5000",
                       env={"CONCMETER_SEED": "99"})
    assert base.returncode == override.returncode == 0
    a, b = json.loads(base.stdout), json.loads(override.stdout)
    assert a["seed"] == 1 and b["seed"] == 99
    assert a["median"] != b["median"]


def test_transport_command(tmp_path):
    out = tmp_path / "u.csv"
    res = run_cli("transport", "--p", "1", "--n", "16", "--out", str(out))
    assert res.returncode == 0
    info = json.loads(res.stdout)
    assert info["n_times_lipschitz"] == pytest.approx(2.3528, abs=0.001)
    lines = out.read_text().splitlines()
    assert lines[1] == "r,u"


def test_pushforward_command(tmp_path):
    out = tmp_path / "img.csv"
    res = run_cli("pushforward", "--K", "l2", "--L", "l1", "--measure",
                  "haar_sphere", "--n", "4", "--N", "200", "--out", str(out))
    assert res.returncode == 0
    data = np.loadtxt(out, delimiter=",", skiprows=2)
    assert np.allclose(np.abs(data).sum(axis=1), 1.0, atol=1e-9)


def test_verify_command(tmp_path):
    out = tmp_path / "rep.json"
    res = run_cli("verify", "cube_floor", "--n", "4", "--N", "20000",
                  "--out", str(out))
    assert res.returncode == 0, res.stderr
    payload = json.loads(out.read_text())
    assert payload["verdict"] == "pass"
    res = run_cli("verify", "never_heard_of_it")
    assert res.returncode == 1


def test_parse_helpers():
    assert cli.parse_eps("0.1,0.2,0.3") == [0.1, 0.2, 0.3]
    grid = cli.parse_eps("0.1:1:4:log")
    assert len(grid) == 4 and grid[0] == pytest.approx(0.1)
    with pytest.raises(cli.ConfigError):
        cli.parse_eps([])
    with pytest.raises(cli.ConfigError):
        cli.parse_norm("gaussian", 4)
    norm = cli.parse_norm("l1.5", 6)
    assert norm.p == 1.5 and norm.dim == 6
