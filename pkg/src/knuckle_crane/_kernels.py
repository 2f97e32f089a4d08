"""Compiled inner loops for the crane dynamics.

Every kernel takes the flat parameter vector built by
:meth:`knuckle_crane.model.CraneParams.vector`:
``[A1, A2, A3, A4, A5, m, I_tot, I_b, I_j, g, l_b, l_j, m_b, m_j]``.
"""

from math import cos, sin, sqrt

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def mass(P, q):
    A1, A2, A3, A4, A5, m = P[0], P[1], P[2], P[3], P[4], P[5]
    be, ga, d, t1, t2 = q[1], q[2], q[3], q[4], q[5]
    # numpy trig and P.dtype keep the uncompiled function usable in extended precision
    Sb, Cb, Sg, Cg = np.sin(be), np.cos(be), np.sin(ga), np.cos(ga)
    S1, C1, S2, C2 = np.sin(t1), np.cos(t1), np.sin(t2), np.cos(t2)
    h = A4 * Cb + A5 * Cg  # payload mass times horizontal reach of the jib tip
    dm = d * m

    M = np.zeros((6, 6), P.dtype)
    M[0, 0] = (P[6] + d * dm * (1.0 - C1 * C1 * C2 * C2) + A1 * Cb * Cb + A2 * Cg * Cg
               + A3 * Cb * Cg + 2.0 * d * h * S2)
    M[1, 1] = A1 + P[7]
    M[2, 2] = A2 + P[8]
    M[3, 3] = m
    M[4, 4] = d * dm * C2 * C2
    M[5, 5] = d * dm
    M[0, 1] = A4 * d * C2 * Sb * S1
    M[0, 2] = A5 * d * C2 * Sg * S1
    M[0, 3] = C2 * S1 * h
    M[0, 4] = d * C1 * C2 * (h + dm * S2)
    M[0, 5] = -d * S1 * (dm + h * S2)
    M[1, 2] = 0.5 * A3 * np.cos(be - ga)
    M[1, 3] = -A4 * (Sb * S2 + Cb * C1 * C2)
    M[1, 4] = A4 * d * Cb * C2 * S1
    M[1, 5] = -A4 * d * (C2 * Sb - Cb * C1 * S2)
    M[2, 3] = -A5 * (Sg * S2 + Cg * C1 * C2)
    M[2, 4] = A5 * d * Cg * C2 * S1
    M[2, 5] = -A5 * d * (C2 * Sg - Cg * C1 * S2)
    for i in range(6):
        for j in range(i):
            M[i, j] = M[j, i]
    return M


@njit(**_JIT)
def coriolis(P, q, qd):
    A1, A2, A3, A4, A5, m = P[0], P[1], P[2], P[3], P[4], P[5]
    be, ga, d, t1, t2 = q[1], q[2], q[3], q[4], q[5]
    ad, bd, gd, dd, t1d, t2d = qd[0], qd[1], qd[2], qd[3], qd[4], qd[5]
    Sb, Cb, Sg, Cg = sin(be), cos(be), sin(ga), cos(ga)
    S1, C1, S2, C2 = sin(t1), cos(t1), sin(t2), cos(t2)
    h = A4 * Cb + A5 * Cg
    w = A4 * Sb * bd + A5 * Sg * gd  # rate of change of -h
    dm = d * m
    sbg = sin(be - ga)
    # -dM11/dbeta / 2 and -dM11/dgamma / 2
    kb = A4 * d * Sb * S2 + A1 * Sb * Cb + 0.5 * A3 * Sb * Cg
    kg = A5 * d * Sg * S2 + A2 * Sg * Cg + 0.5 * A3 * Cb * Sg
    # dM11/dd / 2
    kd = h * S2 + dm * (1.0 - C1 * C1 * C2 * C2)

    C = np.zeros((6, 6))
    C[0, 0] = (-kb * bd - kg * gd + kd * dd + d * dm * S1 * C1 * C2 * C2 * t1d
               + d * C2 * (h + dm * S2 * C1 * C1) * t2d)
    C[0, 1] = A4 * d * Cb * S1 * C2 * bd - kb * ad
    C[0, 2] = A5 * d * Cg * S1 * C2 * gd - kg * ad
    C[0, 3] = kd * ad + C1 * C2 * (h + dm * S2) * t1d - S1 * (h * S2 + dm) * t2d
    C[0, 4] = (d * dm * S1 * C1 * C2 * C2 * ad + C1 * C2 * (h + dm * S2) * dd
               - d * S1 * C2 * (h + dm * S2) * t1d - d * C1 * S2 * (h + dm * S2) * t2d)
    C[0, 5] = (d * C2 * (h + dm * S2 * C1 * C1) * ad - S1 * (h * S2 + dm) * dd
               - d * C1 * S2 * (h + dm * S2) * t1d - d * S1 * C2 * h * t2d)

    C[1, 0] = kb * ad + A4 * Sb * (d * (C1 * C2 * t1d - S1 * S2 * t2d) + S1 * C2 * dd)
    C[1, 2] = 0.5 * A3 * sbg * gd
    C[1, 3] = A4 * (Sb * S1 * C2 * ad + Cb * S1 * C2 * t1d + (Cb * C1 * S2 - Sb * C2) * t2d)
    C[1, 4] = A4 * (d * Sb * C1 * C2 * ad + d * Cb * (C1 * C2 * t1d - S1 * S2 * t2d) + Cb * S1 * C2 * dd)
    C[1, 5] = A4 * (-d * Sb * S1 * S2 * ad - d * Cb * S1 * S2 * t1d + (Cb * C1 * S2 - Sb * C2) * dd
                    + d * (Sb * S2 + Cb * C1 * C2) * t2d)

    C[2, 0] = kg * ad + A5 * Sg * (d * (C1 * C2 * t1d - S1 * S2 * t2d) + S1 * C2 * dd)
    C[2, 1] = -0.5 * A3 * sbg * bd
    C[2, 3] = A5 * (Sg * S1 * C2 * ad + Cg * S1 * C2 * t1d + (Cg * C1 * S2 - Sg * C2) * t2d)
    C[2, 4] = A5 * (d * Sg * C1 * C2 * ad + d * Cg * (C1 * C2 * t1d - S1 * S2 * t2d) + Cg * S1 * C2 * dd)
    C[2, 5] = A5 * (-d * Sg * S1 * S2 * ad - d * Cg * S1 * S2 * t1d + (Cg * C1 * S2 - Sg * C2) * dd
                    + d * (Sg * S2 + Cg * C1 * C2) * t2d)

    C[3, 0] = -S1 * C2 * w - kd * ad - dm * S2 * C1 * C2 * t1d + dm * S1 * t2d
    C[3, 1] = A4 * (-Sb * S1 * C2 * ad + (Sb * C1 * C2 - Cb * S2) * bd)
    C[3, 2] = A5 * (-Sg * S1 * C2 * ad + (Sg * C1 * C2 - Cg * S2) * gd)
    C[3, 4] = -dm * C2 * (S2 * C1 * ad + C2 * t1d)
    C[3, 5] = dm * (S1 * ad - t2d)

    C[4, 0] = (-d * C1 * C2 * w - d * dm * S1 * C1 * C2 * C2 * ad + dm * S2 * C1 * C2 * dd
               + d * dm * C1 * C2 * C2 * t2d)
    C[4, 1] = -A4 * d * Sb * C2 * (C1 * ad + S1 * bd)
    C[4, 2] = -A5 * d * Sg * C2 * (C1 * ad + S1 * gd)
    C[4, 3] = dm * C2 * (S2 * C1 * ad + C2 * t1d)
    C[4, 4] = dm * C2 * (C2 * dd - d * S2 * t2d)
    C[4, 5] = d * dm * C2 * (C1 * C2 * ad - S2 * t1d)

    C[5, 0] = (d * S1 * S2 * w - d * C2 * (h + dm * S2 * C1 * C1) * ad - dm * S1 * dd
               - d * dm * C1 * C2 * C2 * t1d)
    C[5, 1] = A4 * d * (Sb * S1 * S2 * ad - (Sb * S2 * C1 + Cb * C2) * bd)
    C[5, 2] = A5 * d * (Sg * S1 * S2 * ad - (Sg * S2 * C1 + Cg * C2) * gd)
    C[5, 3] = dm * (t2d - S1 * ad)
    C[5, 4] = d * dm * C2 * (S2 * t1d - C1 * C2 * ad)
    C[5, 5] = dm * dd
    return C


@njit(**_JIT)
def gravity(P, q):
    g, m, l_b, l_j, m_b, m_j = P[9], P[5], P[10], P[11], P[12], P[13]
    be, ga, d, t1, t2 = q[1], q[2], q[3], q[4], q[5]
    G = np.empty(6)
    G[0] = 0.0
    G[1] = g * l_b * cos(be) * (m + 0.5 * m_b + m_j)
    G[2] = g * l_j * cos(ga) * (m + 0.5 * m_j)
    G[3] = -g * m * cos(t1) * cos(t2)
    G[4] = g * m * d * cos(t2) * sin(t1)
    G[5] = g * m * d * cos(t1) * sin(t2)
    return G


@njit(**_JIT)
def cholesky_solve(M, b):
    """Solve ``M x = b``; returns ``(x, cond)`` with ``cond = inf`` if not SPD.

    ``cond`` is ``(max L_ii / min L_ii)^2``, a cheap lower bound on the
    2-norm condition number.
    """
    n = b.shape[0]
    L = np.zeros((n, n))
    x = np.zeros(n)
    for i in range(n):
        for j in range(i + 1):
            acc = M[i, j]
            for k in range(j):
                acc -= L[i, k] * L[j, k]
            if i == j:
                if not acc > 0.0:
                    return x, np.inf
                L[i, i] = sqrt(acc)
            else:
                L[i, j] = acc / L[j, j]
    y = np.empty(n)
    for i in range(n):
        acc = b[i]
        for k in range(i):
            acc -= L[i, k] * y[k]
        y[i] = acc / L[i, i]
    for i in range(n - 1, -1, -1):
        acc = y[i]
        for k in range(i + 1, n):
            acc -= L[k, i] * x[k]
        x[i] = acc / L[i, i]
    lo = L[0, 0]
    hi = L[0, 0]
    for i in range(1, n):
        lo = min(lo, L[i, i])
        hi = max(hi, L[i, i])
    return x, (hi / lo) ** 2


@njit(**_JIT)
def bias(P, q, qd, zeta):
    """``zeta - C(q, qd) qd - g(q)``."""
    C = coriolis(P, q, qd)
    return zeta - C @ qd - gravity(P, q)


@njit(**_JIT)
def accel(P, q, qd, zeta):
    return cholesky_solve(mass(P, q), bias(P, q, qd, zeta))
