"""Energies, the Lyapunov candidate and their time derivatives."""

from __future__ import annotations

from math import cos
from typing import NamedTuple

import numpy as np

from .dynamics import _arrays, _state, mass_matrix, potential_energy
from .model import ControlGains, CraneParams, Setpoint

__all__ = [
    "ErrorSignals",
    "error_signals",
    "kinetic_energy",
    "potential_energy",
    "energy_E",
    "energy_rate",
    "lyapunov_V",
    "lyapunov_Vdot_analytic",
]


class ErrorSignals(NamedTuple):
    e_alpha: float
    e_beta: float
    e_gamma: float
    e_d: float


def error_signals(s, sp: Setpoint) -> ErrorSignals:
    q, _ = _state(s)
    return ErrorSignals(sp.alpha_d - q[0], sp.beta_d - q[1], sp.gamma_d - q[2], sp.d_d - q[3])


def kinetic_energy(p: CraneParams, s) -> float:
    """``0.5 qd^T M(q) qd``."""
    q, qdot = _arrays(s)
    return 0.5 * float(qdot @ mass_matrix(p, q) @ qdot)


def energy_E(p: CraneParams, s) -> float:
    """Kinetic energy plus the swing potential ``m g d (1 - cos th1 cos th2)``.

    Zero exactly when the crane is at rest with the payload hanging straight
    down, whatever the boom configuration.
    """
    q, _ = _state(s)
    d, t1, t2 = q[3], q[4], q[5]
    return kinetic_energy(p, s) + p.m * p.g * d * (1.0 - cos(t1) * cos(t2))


def energy_rate(p: CraneParams, s, u) -> float:
    """Time derivative of :func:`energy_E` along the dynamics for input ``u``.

    Only actuated velocities appear; the swing coordinates exchange energy
    internally.
    """
    q, qdot = _state(s)
    be, ga = q[1], q[2]
    ad, bd, gd, dd = qdot[:4]
    g = p.g
    return (ad * u[0]
            + bd * (u[1] - g * p.l_b * cos(be) * (p.m + 0.5 * p.m_b + p.m_j))
            + gd * (u[2] - g * p.l_j * cos(ga) * (p.m + 0.5 * p.m_j))
            + dd * (u[3] + p.m * g))


def lyapunov_V(p: CraneParams, s, sp: Setpoint, k: ControlGains) -> float:
    e = np.array(error_signals(s, sp))
    return energy_E(p, s) + 0.5 * float(np.dot(k.kp, e * e))


def lyapunov_Vdot_analytic(s, k: ControlGains) -> float:
    """Closed-loop ``dV/dt = -sum kd_i v_i^2`` over the four actuated rates."""
    _, qdot = _state(s)
    v = np.asarray(qdot[:4], dtype=float)
    return -float(np.dot(k.kd, v * v))
