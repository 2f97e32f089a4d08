"""Closed-loop scenario runner, RK4 integration, disturbances and metrics."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels as _k
from .controllers import LqrWeights, design_lqr, gravity_compensation
from .dynamics import COND_LIMIT, _checked, forward_dynamics, payload_jacobian
from .energy import energy_E
from .model import (
    COORDINATES,
    INPUTS,
    RATES,
    ConfigError,
    ControlGains,
    CraneParams,
    GeneralizedState,
    Setpoint,
    check_domain,
)

CSV_COLUMNS = ("t",) + COORDINATES + RATES + INPUTS + ("E", "V")


class Controller(str, enum.Enum):
    PD = "pd"
    LQR = "lqr"


@dataclass(frozen=True)
class WindGust:
    """Rectangular force pulse on the payload, given in the world frame (N)."""

    t_start: float = 30.0
    duration: float = 1.0
    force_world: tuple = (50.0, 0.0, 0.0)
    kind: str = "wind_gust"

    def __post_init__(self):
        force = tuple(float(f) for f in self.force_world)
        if len(force) != 3 or not all(math.isfinite(f) for f in force):
            raise ConfigError("WindGust.force_world must be three finite numbers")
        object.__setattr__(self, "force_world", force)
        if not self.duration > 0:
            raise ConfigError("WindGust.duration must be positive")
        if not math.isfinite(self.t_start):
            raise ConfigError("WindGust.t_start must be finite")
        if self.kind != "wind_gust":
            raise ConfigError(f"unknown disturbance kind {self.kind!r}")

    def active(self, t):
        return self.t_start <= t < self.t_start + self.duration


DisturbanceSpec = WindGust


@dataclass(frozen=True)
class NoiseSpec:
    """Zero-mean Gaussian noise on the measured coordinates."""

    sigma_angles: float = math.radians(0.05)
    sigma_d: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        for name in ("sigma_angles", "sigma_d"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ConfigError(f"NoiseSpec.{name} must be finite and non-negative")

    @property
    def sigmas(self):
        a = self.sigma_angles
        return np.array([a, a, a, self.sigma_d, a, a])


@dataclass(frozen=True)
class ScenarioConfig:
    setpoint: Setpoint = field(default_factory=Setpoint)
    initial_state: GeneralizedState = field(
        default_factory=lambda: GeneralizedState([0.0, 0.0, 0.0, 1.0, 0.0, 0.0]))
    plant_params: CraneParams = field(default_factory=CraneParams)
    nominal_params: CraneParams = field(default_factory=CraneParams)
    controller: Controller = Controller.PD
    gains: ControlGains = field(default_factory=ControlGains)
    lqr_weights: LqrWeights | None = None
    disturbances: tuple = ()
    noise: NoiseSpec | None = None
    dt: float = 1e-3
    t_final: float = 150.0
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "controller", Controller(self.controller))
        object.__setattr__(self, "disturbances", tuple(self.disturbances))
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError("ScenarioConfig.dt must be positive")
        if not (math.isfinite(self.t_final) and self.t_final >= self.dt):
            raise ConfigError("ScenarioConfig.t_final must be at least dt")
        try:
            self.initial_state.check()
        except Exception as exc:
            raise ConfigError(f"ScenarioConfig.initial_state is not admissible: {exc}") from exc

    @property
    def n_steps(self):
        # guard against 150/0.001 landing a hair under an integer
        return int(math.floor(self.t_final / self.dt + 1e-9))

    def replace(self, **changes):
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        values.update(changes)
        return ScenarioConfig(**values)


@dataclass
class TrajectoryLog:
    t: np.ndarray
    q: np.ndarray
    qdot: np.ndarray
    u: np.ndarray
    E: np.ndarray
    V: np.ndarray

    def __len__(self):
        return len(self.t)

    def table(self) -> np.ndarray:
        return np.column_stack([self.t, self.q, self.qdot, self.u, self.E, self.V])

    @classmethod
    def from_table(cls, data) -> "TrajectoryLog":
        data = np.asarray(data, dtype=float).reshape(-1, len(CSV_COLUMNS))
        return cls(data[:, 0], data[:, 1:7], data[:, 7:13], data[:, 13:17], data[:, 17], data[:, 18])

    def column(self, name):
        return self.table()[:, CSV_COLUMNS.index(name)]

    def state(self, i) -> GeneralizedState:
        return GeneralizedState(self.q[i], self.qdot[i])

    def to_csv(self, dest=None) -> str:
        """Serialize with shortest round-trip decimals; write to ``dest`` if given."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.table().tolist():
            w.writerow([repr(v) for v in row])
        text = buf.getvalue()
        if dest is not None:
            Path(dest).write_text(text, encoding="utf-8")
        return text

    @classmethod
    def from_csv(cls, src) -> "TrajectoryLog":
        text = src if isinstance(src, str) and "\n" in src else Path(src).read_text(encoding="utf-8")
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != CSV_COLUMNS:
            raise ConfigError("trajectory CSV header does not match the expected columns")
        return cls.from_table([[float(v) for v in r] for r in rows[1:]])


def rk4_step(f, t, x, dt):
    """One classical Runge-Kutta step of ``x' = f(t, x)``."""
    k1 = f(t, x)
    k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2)
    k4 = f(t + dt, x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(p: CraneParams, s: GeneralizedState, u_provider, dt, t=0.0, extra_force=None,
             luff_guard=True) -> GeneralizedState:
    """Advance the plant by ``dt``; ``u_provider(t, x)`` is called at every stage.

    ``extra_force(t, x)``, if given, returns additional generalized forces.
    """
    if not dt > 0:
        raise ConfigError("dt must be positive")
    check_domain(s.q, t=t, luff=luff_guard)

    def f(tau, x):
        q, qd = x[:6], x[6:]
        check_domain(q, t=tau, luff=luff_guard)
        ef = None if extra_force is None else extra_force(tau, x)
        qdd = forward_dynamics(p, (q, qd), u_provider(tau, x), extra_force=ef, check=False, t=tau)
        return np.concatenate([qd, qdd])

    return GeneralizedState.from_vector(rk4_step(f, t, s.x, dt))


def wind_generalized_force(p: CraneParams, s, force_world) -> np.ndarray:
    """Generalized force ``J^T F`` of a world-frame force ``F`` on the payload."""
    F = np.asarray(force_world, dtype=float).reshape(3)
    if not np.any(F):
        return np.zeros(6)
    return payload_jacobian(p, s, h=1e-7).T @ F


def _make_controller(cfg: ScenarioConfig):
    """Return ``u(q_meas, qd_meas)`` for the configured law."""
    sp, k, pn = cfg.setpoint, cfg.gains, cfg.nominal_params
    if cfg.controller is Controller.PD:
        target, kp, kd = sp.actuated, k.kp, k.kd

        def control(q, qd):
            return kp * (target - q[:4]) - kd * qd[:4] + gravity_compensation(pn, q)
        return control

    model, _, K = design_lqr(pn, sp, cfg.lqr_weights)
    x_eq, u_eq = model.x_eq, model.u_eq

    def control(q, qd):
        return u_eq - K @ (np.concatenate([q, qd]) - x_eq)
    return control


class SimulationAborted(Exception):
    """Wraps a mid-run failure together with the trajectory up to that point."""

    def __init__(self, cause, log):
        self.cause = cause
        self.log = log
        super().__init__(str(cause))


def run_scenario(cfg: ScenarioConfig, keep_partial=False) -> TrajectoryLog:
    """Simulate ``cfg`` and return the logged trajectory.

    Domain violations and singular mass matrices propagate with the time at
    which they occurred. With ``keep_partial`` they are wrapped in
    :class:`SimulationAborted`, which also carries the rows logged so far.
    """
    plant = cfg.plant_params
    P = plant.vector
    control = _make_controller(cfg)
    kp = cfg.gains.kp
    target = cfg.setpoint.actuated

    if cfg.noise is not None:
        rng = np.random.default_rng([cfg.rng_seed, cfg.noise.seed])
        sigmas = cfg.noise.sigmas

        def measured_u(q, qd):
            return control(q + sigmas * rng.standard_normal(6), qd)
    else:
        measured_u = control

    gusts = cfg.disturbances
    zeta = np.zeros(6)

    def f(t, x):
        q, qd = x[:6], x[6:]
        check_domain(q, t=t)
        u = measured_u(q, qd)
        zeta[:4] = u
        zeta[4:] = 0.0
        for g in gusts:
            if g.active(t):
                zeta[:] += wind_generalized_force(plant, (q, qd), g.force_world)
        if not np.all(np.isfinite(zeta)):
            raise ConfigError(f"non-finite control input at t={t:.6g} s")
        qdd, cond = _k.accel(P, q, qd, zeta)
        if not cond < COND_LIMIT:
            qdd = _checked(_k.mass(P, q), _k.bias(P, q, qd, zeta), qdd, cond, t)
        return np.concatenate([qd, qdd]), u

    n = cfg.n_steps
    dt = cfg.dt
    t_grid = np.arange(n + 1) * dt
    X = np.empty((n + 1, 12))
    U = np.empty((n + 1, 4))
    x = cfg.initial_state.x.copy()
    i = 0
    try:
        for i in range(n + 1):
            t = t_grid[i]
            X[i] = x
            k1, U[i] = f(t, x)
            if i == n:
                break
            k2, _ = f(t + 0.5 * dt, x + 0.5 * dt * k1)
            k3, _ = f(t + 0.5 * dt, x + 0.5 * dt * k2)
            k4, _ = f(t + dt, x + dt * k3)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    except Exception as exc:
        if not keep_partial:
            raise
        log = _finish(plant, t_grid[:i], X[:i], U[:i], target, kp)
        raise SimulationAborted(exc, log) from exc
    return _finish(plant, t_grid, X, U, target, kp)


def _finish(plant, t, X, U, target, kp):
    E = np.array([energy_E(plant, (x[:6], x[6:])) for x in X])
    e = target - X[:, :4]
    V = E + 0.5 * (e * e) @ kp
    return TrajectoryLog(t.copy(), X[:, :6].copy(), X[:, 6:].copy(), U.copy(), E, V)


@dataclass
class MetricsReport:
    settling_time: dict
    residual_swing: dict
    peak_input: dict
    final_error: dict
    V0: float
    final_V: float
    t_final: float

    @property
    def settled(self):
        return all(v is not None for v in self.settling_time.values())

    def to_dict(self):
        return {
            "settling_time": {k: ("did not settle" if v is None else v)
                              for k, v in self.settling_time.items()},
            "residual_swing_deg": {k: math.degrees(v) for k, v in self.residual_swing.items()},
            "peak_input": self.peak_input,
            "final_error": self.final_error,
            "V0": self.V0,
            "final_V": self.final_V,
            "t_final": self.t_final,
        }


def settling_time(t, x, target, band_fraction=0.02):
    """First time after which ``|target - x|`` stays within the band, else ``None``.

    The band is ``band_fraction`` of the commanded step ``|target - x[0]|``.
    """
    err = np.abs(target - np.asarray(x))
    band = band_fraction * err[0]
    outside = np.flatnonzero(err > band)
    if outside.size == 0:
        return float(t[0])
    last = outside[-1]
    if last + 1 >= len(t):
        return None
    return float(t[last + 1])


def metrics(log: TrajectoryLog, sp: Setpoint, window=0.2) -> MetricsReport:
    if len(log) == 0:
        raise ValueError("empty trajectory")
    target = sp.actuated
    t = log.t
    tail = t >= t[-1] - window * (t[-1] - t[0])
    return MetricsReport(
        settling_time={name: settling_time(t, log.q[:, i], target[i])
                       for i, name in enumerate(COORDINATES[:4])},
        residual_swing={name: float(np.max(np.abs(log.q[tail, i])))
                        for i, name in ((4, "theta1"), (5, "theta2"))},
        peak_input={name: float(np.max(np.abs(log.u[:, i]))) for i, name in enumerate(INPUTS)},
        final_error={name: float(target[i] - log.q[-1, i]) for i, name in enumerate(COORDINATES[:4])},
        V0=float(log.V[0]),
        final_V=float(log.V[-1]),
        t_final=float(t[-1]),
    )
