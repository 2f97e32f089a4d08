"""PD plus gravity-compensation law and the LQR baseline."""

from __future__ import annotations

from dataclasses import dataclass
from math import cos

import numpy as np
import scipy.linalg

from .dynamics import _state, forward_dynamics
from .model import ConfigError, ControlGains, CraneError, CraneParams, GeneralizedState, Setpoint


class RiccatiError(CraneError):
    """The Riccati iteration failed to converge or to stabilize."""


@dataclass(frozen=True)
class LinearModel:
    A: np.ndarray
    B: np.ndarray
    x_eq: np.ndarray
    u_eq: np.ndarray


@dataclass(frozen=True)
class LqrWeights:
    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        R = np.asarray(self.R, dtype=float)
        if Q.ndim == 1:
            Q = np.diag(Q)
        if R.ndim == 1:
            R = np.diag(R)
        if Q.shape != (12, 12) or R.shape != (4, 4):
            raise ConfigError("LQR weights must be Q: 12x12 and R: 4x4")
        if np.any(np.diag(Q) < 0) or np.any(np.diag(R) <= 0):
            raise ConfigError("LQR weights need Q >= 0 and R > 0 on the diagonal")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "R", R)

    @classmethod
    def default(cls):
        return cls(
            Q=np.diag([1e2, 1e3, 1e3, 5**2, 10, 10, 10, 10, 10, 50, 1e2, 1e2]),
            R=np.diag([50.0, 50.0, 50.0, 10.0]),
        )


def gravity_compensation(p: CraneParams, q) -> np.ndarray:
    """Actuator inputs that hold the crane still at ``q`` with the payload hanging."""
    g = p.g
    return np.array([
        0.0,
        g * p.l_b * cos(q[1]) * (p.m + 0.5 * p.m_b + p.m_j),
        g * p.l_j * cos(q[2]) * (p.m + 0.5 * p.m_j),
        -p.m * g,
    ])


def pd_gravity_control(p_nominal: CraneParams, s_measured, sp: Setpoint, k: ControlGains) -> np.ndarray:
    """PD feedback on the actuated coordinates plus gravity compensation.

    Uses only the measured state and the parameters the controller believes in;
    the swing angles are never fed back.
    """
    q, qdot = _state(s_measured)
    e = sp.actuated - np.asarray(q[:4], dtype=float)
    return k.kp * e - k.kd * np.asarray(qdot[:4], dtype=float) + gravity_compensation(p_nominal, q)


def state_derivative(p: CraneParams, x, u, check=False) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    qdd = forward_dynamics(p, (x[:6], x[6:]), u, check=check)
    return np.concatenate([x[6:], qdd])


def linearize(p: CraneParams, sp: Setpoint, h=1e-6, tol=1e-8) -> LinearModel:
    """Central-difference linearization about the hanging equilibrium at ``sp``."""
    x_eq = np.concatenate([sp.q, np.zeros(6)])
    u_eq = gravity_compensation(p, sp.q)
    f0 = state_derivative(p, x_eq, u_eq, check=True)
    if not np.linalg.norm(f0) <= tol:
        raise CraneError(f"equilibrium residual {np.linalg.norm(f0):.3e} exceeds {tol:g}")
    A = np.empty((12, 12))
    for i in range(12):
        dx = np.zeros(12)
        dx[i] = h
        A[:, i] = (state_derivative(p, x_eq + dx, u_eq) - state_derivative(p, x_eq - dx, u_eq)) / (2 * h)
    B = np.empty((12, 4))
    for i in range(4):
        du = np.zeros(4)
        du[i] = h
        B[:, i] = (state_derivative(p, x_eq, u_eq + du) - state_derivative(p, x_eq, u_eq - du)) / (2 * h)
    # the position rows are exact kinematic identities
    A[:6] = np.hstack([np.zeros((6, 6)), np.eye(6)])
    B[:6] = 0.0
    return LinearModel(A, B, x_eq, u_eq)


def care_residual(A, B, Q, R, P):
    return A.T @ P + P @ A - P @ B @ np.linalg.solve(R, B.T @ P) + Q


def _hamiltonian_seed(A, B, Q, R):
    n = A.shape[0]
    G = B @ np.linalg.solve(R, B.T)
    H = np.block([[A, -G], [-Q, -A.T]])
    T, U, sdim = scipy.linalg.schur(H, output="real", sort="lhp")
    if sdim != n:
        raise RiccatiError(f"Hamiltonian has {sdim} stable eigenvalues, expected {n}")
    try:
        P = np.linalg.solve(U[:n, :n].T, U[n:, :n].T).T
    except np.linalg.LinAlgError:
        raise RiccatiError("stable subspace is not a graph; (A, B) not stabilizable?") from None
    return 0.5 * (P + P.T)


def solve_care(A, B, Q, R, rtol=1e-9, max_iter=200):
    """Stabilizing solution of the continuous algebraic Riccati equation.

    Seeds with the stable invariant subspace of the Hamiltonian matrix, then
    polishes with Newton-Kleinman steps until the residual is below
    ``rtol * ||Q||``. When ``P`` is large that target can sit under the
    double-precision floor of the residual itself, so the target is raised to
    that floor. Returns ``(P, K)`` with ``K = R^-1 B^T P``.
    """
    A, B, Q, R = (np.asarray(M, dtype=float) for M in (A, B, Q, R))
    qnorm = np.linalg.norm(Q)
    G = B @ np.linalg.solve(R, B.T)
    P = _hamiltonian_seed(A, B, Q, R)
    K = np.linalg.solve(R, B.T @ P)
    res = np.linalg.norm(care_residual(A, B, Q, R, P))

    def target(P):
        pn = np.linalg.norm(P)
        floor = 64 * np.finfo(float).eps * (2 * np.linalg.norm(A) * pn + np.linalg.norm(G) * pn**2 + qnorm)
        return max(rtol * qnorm, floor)

    stalled = 0
    for _ in range(max_iter):
        if res <= target(P) or stalled >= 3:
            break
        Acl = A - B @ K
        P_new = scipy.linalg.solve_continuous_lyapunov(Acl.T, -(Q + K.T @ R @ K))
        P_new = 0.5 * (P_new + P_new.T)
        K_new = np.linalg.solve(R, B.T @ P_new)
        res_new = np.linalg.norm(care_residual(A, B, Q, R, P_new))
        if not np.isfinite(res_new):
            break
        if res_new < res:
            P, K, res, stalled = P_new, K_new, res_new, 0
        else:
            stalled += 1
            # keep iterating from the newer point; Newton steps can bounce
            K = K_new
    if res > target(P):
        raise RiccatiError(f"residual {res:.3e} above {target(P):.3e}")
    K = np.linalg.solve(R, B.T @ P)
    eig = np.linalg.eigvals(A - B @ K)
    if not np.all(eig.real < 0):
        raise RiccatiError(f"closed loop not stable: spectral abscissa {eig.real.max():.3e}")
    return P, K


def lqr_control(model: LinearModel, K, s_measured, sp: Setpoint | None = None) -> np.ndarray:
    """``u = u_eq - K (x - x_eq)`` around the gravity-compensated equilibrium."""
    x = s_measured.x if isinstance(s_measured, GeneralizedState) else np.concatenate(_state(s_measured))
    x_eq = model.x_eq if sp is None else np.concatenate([sp.q, np.zeros(6)])
    return model.u_eq - K @ (x - x_eq)


def design_lqr(p_nominal: CraneParams, sp: Setpoint, weights: LqrWeights | None = None):
    weights = weights or LqrWeights.default()
    model = linearize(p_nominal, sp)
    P, K = solve_care(model.A, model.B, weights.Q, weights.R)
    return model, P, K
