"""Inertia, Coriolis and gravity terms of the knuckle-boom crane.

The model is ``M(q) qdd + C(q, qd) qd + g(q) = [u1, u2, u3, u4, 0, 0]``.
``M`` and ``g`` are written out entry by entry in :mod:`._kernels`; ``C``
uses the Christoffel symbols of ``M`` so that ``Mdot - 2C`` is
skew-symmetric.

World frame: right-handed, z up, x along the boom at zero slew.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, sin

import numpy as np

from . import _kernels as _k
from .model import (
    CraneParams,
    GeneralizedState,
    SingularMassMatrix,
    check_domain,
    generalized_force,
)

COND_LIMIT = 1e12


@dataclass(frozen=True)
class DynamicsTerms:
    M: np.ndarray
    C: np.ndarray
    gvec: np.ndarray


def _state(s):
    if isinstance(s, GeneralizedState):
        return s.q, s.qdot
    q, qdot = s
    return q, qdot


def _arrays(s):
    q, qdot = _state(s)
    return np.asarray(q, dtype=float).reshape(6), np.asarray(qdot, dtype=float).reshape(6)


def mass_matrix(p: CraneParams, q) -> np.ndarray:
    return _k.mass(p.vector, np.asarray(q, dtype=float))


def coriolis_matrix(p: CraneParams, q, qdot) -> np.ndarray:
    return _k.coriolis(p.vector, np.asarray(q, dtype=float), np.asarray(qdot, dtype=float))


def gravity_vector(p: CraneParams, q) -> np.ndarray:
    return _k.gravity(p.vector, np.asarray(q, dtype=float))


def assemble_terms(p: CraneParams, s, check=True) -> DynamicsTerms:
    """Return ``M``, ``C`` and ``g`` at state ``s``.

    Raises :class:`~knuckle_crane.model.DomainViolation` when ``check`` is set
    and the state is outside the admissible region.
    """
    q, qdot = _arrays(s)
    if check:
        check_domain(q)
    return DynamicsTerms(mass_matrix(p, q), coriolis_matrix(p, q, qdot), gravity_vector(p, q))


def solve_mass(M, rhs, t=None):
    """Solve ``M x = rhs`` for the symmetric positive definite mass matrix.

    Cholesky first; if it fails, a pivoted LU solve. The condition number is
    estimated from the Cholesky diagonal (a lower bound) and checked against
    ``COND_LIMIT``.
    """
    M = np.asarray(M, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    x, cond = _k.cholesky_solve(M, rhs)
    return _checked(M, rhs, x, cond, t)


def _checked(M, rhs, x, cond, t):
    if np.isinf(cond):
        cond = np.linalg.cond(M)
        if not cond < COND_LIMIT:
            raise SingularMassMatrix(cond, t)
        return np.linalg.solve(M, rhs)
    if not cond < COND_LIMIT:
        raise SingularMassMatrix(cond, t)
    return x


def forward_dynamics(p: CraneParams, s, u, extra_force=None, check=True, t=None) -> np.ndarray:
    """Generalized accelerations ``qdd`` for input ``u`` (4-vector).

    ``extra_force`` is an optional 6-vector of additional generalized forces
    (for example a wind load mapped through the payload Jacobian).
    """
    q, qdot = _arrays(s)
    if check:
        check_domain(q, t=t)
    zeta = generalized_force(u)
    if extra_force is not None:
        zeta = zeta + np.asarray(extra_force, dtype=float)
    x, cond = _k.accel(p.vector, q, qdot, zeta)
    if np.isinf(cond) or not cond < COND_LIMIT:
        M = _k.mass(p.vector, q)
        return _checked(M, _k.bias(p.vector, q, qdot, zeta), x, cond, t)
    return x


def potential_energy(p: CraneParams, s) -> float:
    """Total gravitational potential energy of boom, jib and payload."""
    q = s.q if isinstance(s, GeneralizedState) else np.asarray(s[0] if isinstance(s, tuple) else s)
    _, be, ga, d, t1, t2 = q
    g = p.g
    return (g * p.m * (p.l_b * sin(be) + p.l_j * sin(ga) - cos(t1) * cos(t2) * d)
            + g * p.m_j * (p.l_b * sin(be) + 0.5 * p.l_j * sin(ga))
            + 0.5 * g * p.l_b * p.m_b * sin(be))


def gravity_from_potential(p: CraneParams, s, h=1e-6) -> np.ndarray:
    """Central-difference gradient of :func:`potential_energy` in ``q``."""
    q, _ = _state(s)
    check_domain(q)
    q = np.array(q, dtype=float)
    grad = np.empty(6)
    for i in range(6):
        qp, qm = q.copy(), q.copy()
        qp[i] += h
        qm[i] -= h
        grad[i] = (potential_energy(p, qp) - potential_energy(p, qm)) / (2.0 * h)
    return grad


def payload_position(p: CraneParams, s) -> np.ndarray:
    """Payload position in the world frame (m).

    The jib tip sits at horizontal reach ``l_b cos(beta) + l_j cos(gamma)``
    along slew direction ``alpha``; theta2 swings the cable radially and
    theta1 tangentially.
    """
    q = s.q if isinstance(s, GeneralizedState) else np.asarray(s[0] if isinstance(s, tuple) else s)
    al, be, ga, d, t1, t2 = q
    radial = p.l_b * cos(be) + p.l_j * cos(ga) + d * sin(t2)
    tangential = d * sin(t1) * cos(t2)
    return np.array([
        cos(al) * radial - sin(al) * tangential,
        sin(al) * radial + cos(al) * tangential,
        p.l_b * sin(be) + p.l_j * sin(ga) - d * cos(t1) * cos(t2),
    ])


def payload_jacobian(p: CraneParams, s, h=1e-7) -> np.ndarray:
    """3x6 Jacobian of :func:`payload_position` by central differences."""
    q, _ = _state(s)
    q = np.array(q, dtype=float)
    J = np.empty((3, 6))
    for i in range(6):
        qp, qm = q.copy(), q.copy()
        qp[i] += h
        qm[i] -= h
        J[:, i] = (payload_position(p, qp) - payload_position(p, qm)) / (2.0 * h)
    return J
