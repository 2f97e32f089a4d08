import json
import math

import numpy as np
import pytest

from knuckle_crane import ConfigError, Controller, preset
from knuckle_crane.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from knuckle_crane.config import config_from_dict, config_to_dict, load_config


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


# -- config files -------------------------------------------------------------------

def test_ini_overrides(tmp_path):
    cfg = load_config(_write(tmp_path, """
[scenario]
preset = 3
controller = lqr
dt = 0.002
t_final = 10

[plant]
m = 60

[initial_state]
q = 0, 0, 0, 1, 0.1, 0

[wind]
t_start = 2
force_world = 0, 20, 0
"""))
    assert cfg.controller is Controller.LQR
    assert cfg.dt == 0.002 and cfg.t_final == 10
    assert cfg.plant_params.m == 60 and cfg.nominal_params.m == 100
    assert cfg.initial_state.q[4] == 0.1
    assert cfg.disturbances[0].force_world == (0.0, 20.0, 0.0)
    assert cfg.disturbances[0].duration == 1.0


def test_toml_style_values(tmp_path):
    cfg = load_config(_write(tmp_path, """
[scenario]
controller = "pd"
t_final = 5.0

[setpoint]
d_d = 3.0

[noise]
sigma_d = 0.002

[lqr]
r_diag = [10, 10, 10, 1]
""", "run.toml"))
    assert cfg.setpoint.d_d == 3.0
    assert cfg.noise.sigma_d == 0.002 and cfg.noise.sigma_angles == pytest.approx(math.radians(0.05))
    assert np.array_equal(np.diag(cfg.lqr_weights.R), [10, 10, 10, 1])


@pytest.mark.parametrize("text,needle", [
    ("[plant]\nm = -5\n", "[plant]"),
    ("[plant]\nmass = 5\n", "mass"),
    ("[scenario]\ndt = fast\n", "dt"),
    ("[scenario]\ncontroller = mpc\n", "controller"),
    ("[initial_state]\nq = 0, 0, 0\n", "q"),
    ("[lqr]\nr_diag = 1, 1, 0, 1\n", "[lqr]"),
    ("[gains]\nkp_alpha = inf\n", "kp_alpha"),
    ("[weather]\nrain = 1\n", "weather"),
    ("[scenario]\npreset = 9\n", "preset"),
    ("[scenario]\nt_final = -1\n", "t_final"),
])
def test_config_errors_name_the_field(tmp_path, text, needle):
    with pytest.raises(ConfigError) as info:
        load_config(_write(tmp_path, text))
    assert needle in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "nope.ini")


@pytest.mark.parametrize("number", [1, 2, 3, 4, 5])
def test_resolved_config_roundtrip(number):
    cfg = preset(number)
    d = config_to_dict(cfg)
    json.dumps(d)
    assert config_to_dict(config_from_dict(d)) == d


# -- command line ------------------------------------------------------------------

def test_simulate_writes_outputs(tmp_path, capsys):
    assert main(["simulate", "--scenario", "2", "--t-final", "0.5", "--out", str(tmp_path), "--plot"]) == EXIT_OK
    names = {p.name for p in tmp_path.iterdir()}
    assert {"trajectory.csv", "manifest.json", "actuated.svg", "swing.svg", "inputs.svg"} <= names
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["scenario"]["t_final"] == 0.5
    assert manifest["seeds"]["rng_seed"] == 0
    assert manifest["plot"] is True
    assert "settling" in capsys.readouterr().out


def test_output_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("KNUCKLE_CRANE_OUT", str(tmp_path / "env"))
    assert main(["simulate", "--t-final", "0.1"]) == EXIT_OK
    assert (tmp_path / "env" / "trajectory.csv").exists()


def test_reruns_are_byte_identical(tmp_path):
    for name in ("a", "b"):
        assert main(["simulate", "--scenario", "5", "--t-final", "0.3", "--plot", "--out", str(tmp_path / name)]) == 0
    for f in ("trajectory.csv", "actuated.svg", "swing.svg", "inputs.svg"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_manifest_replay(tmp_path):
    assert main(["simulate", "--scenario", "4", "--t-final", "0.3", "--seed", "4", "--plot",
                 "--out", str(tmp_path / "a")]) == 0
    assert main(["simulate", "--config", str(tmp_path / "a" / "manifest.json"), "--out", str(tmp_path / "b")]) == 0
    for f in ("trajectory.csv", "swing.svg"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_bad_config_exit_code(tmp_path, capsys):
    path = _write(tmp_path, "[plant]\nm = -5\n")
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "[plant]" in capsys.readouterr().err
    assert not (tmp_path / "trajectory.csv").exists()


def test_domain_violation_exit_code(tmp_path, capsys):
    path = _write(tmp_path, "[scenario]\nt_final = 3\n[initial_state]\nq = 0, 1.5, 0, 1, 0, 0\nqdot = 0, 2, 0, 0, 0, 0\n")
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path)]) == EXIT_RUNTIME
    assert "beta" in capsys.readouterr().err


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["simulate", "--t-final", "0.1", "--out", str(blocker / "sub")]) == EXIT_RUNTIME


def test_compare_completed(tmp_path, capsys):
    assert main(["compare", "--t-final", "0.2", "--out", str(tmp_path)]) == EXIT_OK
    names = {p.name for p in tmp_path.iterdir()}
    assert {"pd.csv", "lqr.csv", "metrics.csv", "compare_actuated.svg", "manifest.json"} <= names
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert set(manifest["degradation"]) == {"alpha", "beta", "gamma", "d"}
    assert manifest["failures"] == []
    assert "LQR vs PD" in capsys.readouterr().out


def test_compare_reports_aborted_run(tmp_path, capsys):
    assert main(["compare", "--t-final", "1.0", "--no-plot", "--out", str(tmp_path)]) == EXIT_RUNTIME
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    status = {r["controller"]: r["status"] for r in manifest["comparison"]}
    assert status["pd"] == "completed" and status["lqr"].startswith("aborted")
    assert manifest["degradation"] == {}
    assert "lqr" in capsys.readouterr().err


def test_verify_command(capsys):
    assert main(["verify", "--samples", "20"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("PASS") == 6
    assert main(["verify", "--samples", "0"]) == EXIT_CONFIG
