import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from knuckle_crane import (
    ConfigError,
    Controller,
    CraneParams,
    DomainViolation,
    GeneralizedState,
    NoiseSpec,
    ScenarioConfig,
    SimulationAborted,
    TrajectoryLog,
    WindGust,
    metrics,
    preset,
    rk4_step,
    run_scenario,
    step_rk4,
    wind_generalized_force,
)
from knuckle_crane.simulation import CSV_COLUMNS, settling_time


def test_rk4_scalar_decay():
    x, t = np.array([1.0]), 0.0
    for _ in range(10):
        x = rk4_step(lambda t, x: -x, t, x, 0.1)
        t += 0.1
    assert x[0] == pytest.approx(math.exp(-1), abs=1e-6)


def test_hanging_equilibrium_held_by_gravity_compensation(params):
    from knuckle_crane import gravity_compensation

    s = GeneralizedState([0.1, 0.3, 0.2, 2, 0, 0])
    u = gravity_compensation(params, s.q)
    out = s
    for k in range(100):
        out = step_rk4(params, out, lambda q, qd: u, 1e-2, t=k * 1e-2)
    assert np.allclose(out.x, s.x, atol=1e-10)


# -- wind -------------------------------------------------------------------------

def test_wind_zero_force(params):
    s = GeneralizedState([0.3, 0.5, 0.2, 3, 0.1, -0.1])
    assert np.array_equal(wind_generalized_force(params, s, (0, 0, 0)), np.zeros(6))


def test_wind_vertical_force_on_rope(params):
    s = GeneralizedState([0, 0.5, 0.2, 3, 0, 0])
    tau = wind_generalized_force(params, s, (0, 0, -100.0))
    assert tau[3] == pytest.approx(100.0, rel=1e-6)
    assert abs(tau[4]) < 1e-5 and abs(tau[5]) < 1e-5


def test_wind_horizontal_force_does_no_work_on_rope(params):
    s = GeneralizedState([0, 0.5, 0.2, 3, 0, 0])
    tau = wind_generalized_force(params, s, (50.0, 0, 0))
    assert abs(tau[3]) < 1e-5
    assert np.abs(tau[4:]).max() == pytest.approx(150.0, rel=1e-6)


def test_gust_window_is_half_open():
    g = WindGust()
    assert not g.active(29.999) and g.active(30.0) and g.active(30.999) and not g.active(31.0)


def test_gust_validation():
    with pytest.raises(ConfigError, match="duration"):
        WindGust(duration=0)
    with pytest.raises(ConfigError, match="force_world"):
        WindGust(force_world=(1, 2))


# -- config object ----------------------------------------------------------------

def test_default_config_and_row_count():
    cfg = ScenarioConfig()
    assert cfg.dt == 1e-3 and cfg.t_final == 150.0
    assert cfg.n_steps == 150_000
    assert ScenarioConfig(t_final=1.0, dt=0.3).n_steps == 3


@pytest.mark.parametrize("field,value", [("dt", 0.0), ("dt", -1e-3), ("t_final", 0.0), ("dt", float("nan"))])
def test_config_rejects_bad_time_grid(field, value):
    with pytest.raises(ConfigError, match=field):
        ScenarioConfig(**{field: value})


def test_config_rejects_out_of_domain_initial_state():
    with pytest.raises(ConfigError):
        ScenarioConfig(initial_state=GeneralizedState([0, 0, 0, 0.0, 0, 0]))


def test_presets():
    assert preset(2).initial_state.q[4:].tolist() == [0.2, 0.1]
    assert preset(3).plant_params.m == 50 and preset(3).nominal_params.m == 100
    assert preset(4).disturbances == (WindGust(),)
    assert preset(5).noise == NoiseSpec()
    with pytest.raises(ConfigError):
        preset(6)


# -- trajectory log ----------------------------------------------------------------

def _short(number=1, **kw):
    kw.setdefault("t_final", 0.5)
    return run_scenario(preset(number, **kw))


def test_short_run_shape_and_first_row():
    cfg = preset(1, t_final=0.5)
    log = run_scenario(cfg)
    assert len(log) == cfg.n_steps + 1 == 501
    assert log.t[0] == 0.0 and log.t[-1] == pytest.approx(0.5)
    assert np.array_equal(log.q[0], cfg.initial_state.q)
    assert log.E[0] == 0.0
    assert log.V[0] == pytest.approx(0.5 * np.sum(cfg.gains.kp * (cfg.setpoint.actuated - cfg.initial_state.q[:4]) ** 2))
    assert log.table().shape == (501, len(CSV_COLUMNS))


def test_csv_header_and_roundtrip(tmp_path):
    log = _short()
    path = tmp_path / "run.csv"
    text = log.to_csv(path)
    assert path.read_text() == text
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    back = TrajectoryLog.from_csv(path)
    assert np.array_equal(back.table(), log.table())


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (5, len(CSV_COLUMNS)), elements=st.floats(-1e12, 1e12, allow_subnormal=True)))
def test_csv_roundtrip_exact(data):
    log = TrajectoryLog.from_table(data)
    assert np.array_equal(TrajectoryLog.from_csv(log.to_csv()).table(), data)


def test_csv_rejects_wrong_header():
    with pytest.raises(ValueError):
        TrajectoryLog.from_csv("a,b,c\n1,2,3\n")


def test_runs_are_deterministic():
    a = _short(5).to_csv()
    b = _short(5).to_csv()
    assert a == b


def test_noise_seed_changes_trajectory():
    a = _short(5).q
    b = _short(5, rng_seed=1).q
    assert not np.array_equal(a, b)


def test_noise_leaves_noise_free_run_unchanged():
    clean = _short(1)
    noisy = _short(5)
    assert not np.array_equal(clean.q, noisy.q)
    assert np.array_equal(clean.q[0], noisy.q[0])


def test_domain_violation_reports_time():
    cfg = preset(1, t_final=5.0).replace(initial_state=GeneralizedState([0, 1.5, 0, 1, 0, 0], [0, 2.0, 0, 0, 0, 0]))
    with pytest.raises(DomainViolation) as info:
        run_scenario(cfg)
    assert info.value.t is not None and 0 < info.value.t < 1.0


def test_partial_log_is_kept_on_abort():
    cfg = preset(1, t_final=5.0).replace(initial_state=GeneralizedState([0, 1.5, 0, 1, 0, 0], [0, 2.0, 0, 0, 0, 0]))
    with pytest.raises(SimulationAborted) as info:
        run_scenario(cfg, keep_partial=True)
    log = info.value.log
    assert 0 < len(log) < cfg.n_steps
    assert isinstance(info.value.cause, DomainViolation)


def test_wind_changes_trajectory_only_after_gust():
    base = preset(1, t_final=1.0)
    gust = base.replace(disturbances=(WindGust(t_start=0.5, duration=0.2, force_world=(500.0, 0, 0)),))
    a, b = run_scenario(base), run_scenario(gust)
    before = a.t <= 0.5
    assert np.array_equal(a.q[before], b.q[before])
    assert not np.array_equal(a.q[-1], b.q[-1])


def test_lqr_short_run_starts_from_equilibrium_input():
    cfg = preset(1, t_final=0.05, controller=Controller.LQR).replace(
        initial_state=GeneralizedState(preset(1).setpoint.q))
    log = run_scenario(cfg)
    assert np.allclose(log.q, log.q[0], atol=1e-9)


# -- metrics ------------------------------------------------------------------------

def test_settling_time_examples():
    t = np.linspace(0, 10, 11)
    assert settling_time(t, np.ones(11), 1.0) == 0.0
    x = np.array([0, 0.5, 0.9, 0.99, 1.05, 0.99, 1, 1, 1, 1, 1.0])
    assert settling_time(t, x, 1.0) == 5.0
    assert settling_time(t, np.zeros(11), 1.0) is None


def test_metrics_on_constant_log():
    n = 11
    sp = preset(1).setpoint
    q = np.tile(sp.q, (n, 1))
    log = TrajectoryLog(np.linspace(0, 1, n), q, np.zeros((n, 6)), np.zeros((n, 4)), np.zeros(n), np.zeros(n))
    r = metrics(log, sp)
    assert all(v == 0.0 for v in r.residual_swing.values())
    assert all(v == 0.0 for v in r.final_error.values())
    assert all(v == 0.0 for v in r.settling_time.values())
    assert r.settled


@pytest.mark.slow
def test_mismatched_payload_steady_state_offsets(runs):
    """Halving the payload leaves the offsets the nominal gravity term predicts."""
    cfg, log, error, _ = runs.get(3)
    assert error is None
    kp = cfg.gains.kp
    e = cfg.setpoint.actuated - log.q[-1, :4]
    dm = cfg.plant_params.m - cfg.nominal_params.m
    g = cfg.plant_params.g
    q = log.q[-1]
    predicted = np.array([
        0.0,
        g * cfg.plant_params.l_b * math.cos(q[1]) * dm,
        g * cfg.plant_params.l_j * math.cos(q[2]) * dm,
        -dm * g,
    ])
    assert kp[3] * e[3] == pytest.approx(490.5, rel=0.01)
    assert np.allclose(kp[1:] * e[1:], predicted[1:], rtol=0.01)
