"""Plain data types shared by the dynamics, controllers and simulator.

Coordinates are ordered ``q = [alpha, beta, gamma, d, theta1, theta2]``:
tower slew, boom luff, jib luff, cable length, tangential swing and radial
swing. Angles are in radians, lengths in metres.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from functools import cached_property

import numpy as np

COORDINATES = ("alpha", "beta", "gamma", "d", "theta1", "theta2")
RATES = tuple(f"{name}_dot" for name in COORDINATES)
INPUTS = ("u1", "u2", "u3", "u4")

D_MIN = 0.01
HALF_PI = 0.5 * math.pi


class CraneError(Exception):
    """Base class for errors raised by the crane model."""


class ConfigError(CraneError, ValueError):
    """Invalid parameter or configuration value."""


class DomainViolation(CraneError):
    """State left the admissible region (swing, cable or luff bounds)."""

    def __init__(self, coordinate, value, bound, t=None):
        self.coordinate = coordinate
        self.value = value
        self.bound = bound
        self.t = t
        where = "" if t is None else f" at t={t:.6g} s"
        super().__init__(f"{coordinate}={value:.6g} outside admissible bound {bound}{where}")


class SingularMassMatrix(CraneError):
    def __init__(self, condition, t=None):
        self.condition = condition
        self.t = t
        where = "" if t is None else f" at t={t:.6g} s"
        super().__init__(f"mass matrix ill-conditioned (cond estimate {condition:.3e}){where}")


@dataclass(frozen=True)
class CraneParams:
    """Physical parameters of the crane.

    Defaults are the values used by every simulation preset. Boom and jib
    inertias default to slender rods about their centres; the tower to
    100 kg m^2.
    """

    m_b: float = 300.0
    m_j: float = 250.0
    m: float = 100.0
    l_b: float = 2.0
    l_j: float = 2.3
    I_tot: float = 100.0
    I_b: float | None = None
    I_j: float | None = None
    g: float = 9.81

    def __post_init__(self):
        if self.I_b is None:
            object.__setattr__(self, "I_b", self.m_b * self.l_b**2 / 12.0)
        if self.I_j is None:
            object.__setattr__(self, "I_j", self.m_j * self.l_j**2 / 12.0)
        for f in fields(self):
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"CraneParams.{f.name} must be a finite positive number, got {value!r}")

    @property
    def A1(self):
        return self.l_b**2 * self.m + self.l_b**2 * self.m_b / 4 + self.l_b**2 * self.m_j

    @property
    def A2(self):
        return self.l_j**2 * self.m + self.l_j**2 * self.m_j / 4

    @property
    def A3(self):
        return 2 * self.l_b * self.l_j * self.m + self.l_b * self.l_j * self.m_j

    # No factor 2 on A4, A5: with it the scalar equations stop being the
    # Euler-Lagrange equations of the kinetic energy. See docs/model.md.
    @property
    def A4(self):
        return self.l_b * self.m

    @property
    def A5(self):
        return self.l_j * self.m

    @cached_property
    def vector(self) -> np.ndarray:
        """Flat parameter vector consumed by the compiled kernels."""
        v = np.array([self.A1, self.A2, self.A3, self.A4, self.A5, self.m, self.I_tot, self.I_b,
                      self.I_j, self.g, self.l_b, self.l_j, self.m_b, self.m_j], dtype=float)
        v.flags.writeable = False
        return v

    def replace(self, **changes):
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return CraneParams(**values)


@dataclass(frozen=True)
class ControlGains:
    kp_alpha: float = 1e3
    kp_beta: float = 1e4
    kp_gamma: float = 1e4
    kp_d: float = 1e3
    kd_alpha: float = 1e2
    kd_beta: float = 1e3
    kd_gamma: float = 1e3
    kd_d: float = 1e2

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"ControlGains.{f.name} must be strictly positive, got {value!r}")

    @property
    def kp(self):
        return np.array([self.kp_alpha, self.kp_beta, self.kp_gamma, self.kp_d])

    @property
    def kd(self):
        return np.array([self.kd_alpha, self.kd_beta, self.kd_gamma, self.kd_d])


@dataclass(frozen=True)
class Setpoint:
    alpha_d: float = math.radians(60.0)
    beta_d: float = math.radians(30.0)
    gamma_d: float = math.radians(22.0)
    d_d: float = 2.0

    def __post_init__(self):
        for name in ("beta_d", "gamma_d"):
            if not abs(getattr(self, name)) < HALF_PI:
                raise ConfigError(f"Setpoint.{name} must lie strictly inside (-pi/2, pi/2)")
        if not self.d_d >= D_MIN:
            raise ConfigError(f"Setpoint.d_d must be at least {D_MIN} m")

    @property
    def actuated(self):
        return np.array([self.alpha_d, self.beta_d, self.gamma_d, self.d_d])

    @property
    def q(self):
        """Target configuration with the payload hanging straight down."""
        return np.array([self.alpha_d, self.beta_d, self.gamma_d, self.d_d, 0.0, 0.0])


@dataclass(frozen=True)
class GeneralizedState:
    q: np.ndarray
    qdot: np.ndarray = field(default_factory=lambda: np.zeros(6))

    def __post_init__(self):
        q = np.array(self.q, dtype=float).reshape(6)
        qdot = np.array(self.qdot, dtype=float).reshape(6)
        q.flags.writeable = False
        qdot.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qdot", qdot)

    @classmethod
    def from_vector(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x[:6], x[6:])

    @property
    def x(self):
        return np.concatenate([self.q, self.qdot])

    def check(self, t=None, d_min=D_MIN):
        """Raise :class:`DomainViolation` unless the state is admissible."""
        check_domain(self.q, t=t, d_min=d_min)
        return self


def check_domain(q, t=None, d_min=D_MIN, luff=True):
    for i, name in ((1, "beta"), (2, "gamma"), (4, "theta1"), (5, "theta2")):
        if i in (1, 2) and not luff:
            continue
        if not abs(q[i]) < HALF_PI:
            raise DomainViolation(name, q[i], "|x| < pi/2", t)
    if not q[3] >= d_min:
        raise DomainViolation("d", q[3], f"d >= {d_min}", t)
    if not np.all(np.isfinite(q)):
        raise DomainViolation("q", float("nan"), "finite", t)


def generalized_force(u):
    """Map the four actuator inputs to the six generalized forces."""
    u = np.asarray(u, dtype=float).reshape(4)
    if not np.all(np.isfinite(u)):
        raise ConfigError("control input must be finite")
    return np.concatenate([u, np.zeros(2)])
