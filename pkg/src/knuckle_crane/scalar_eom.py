"""Term-by-term scalar equations of motion and kinetic energy.

A second, independent code path: the six equations and the kinetic energy
are written out in fully expanded scalar form without going through ``M``,
``C`` or ``g``. Tests compare it against :mod:`knuckle_crane.dynamics`.
"""

from __future__ import annotations

from math import cos, sin

import numpy as np

from .dynamics import _state
from .model import CraneParams, check_domain, generalized_force


def eom_lhs(p: CraneParams, s, qddot) -> np.ndarray:
    """Left-hand sides of the six scalar equations of motion."""
    q, qdot = _state(s)
    al, be, ga, d, th1, th2 = q
    ad, bd, gd, dd, t1d, t2d = qdot
    add, bdd, gdd, ddd, t1dd, t2dd = qddot
    A1, A2, A3, A4, A5 = p.A1, p.A2, p.A3, p.A4, p.A5
    m, g, lB, lJ, mB, mJ = p.m, p.g, p.l_b, p.l_j, p.m_b, p.m_j
    It, IB, IJ = p.I_tot, p.I_b, p.I_j
    Sb, Sg, S1, S2 = sin(be), sin(ga), sin(th1), sin(th2)
    Cb, Cg, C1, C2 = cos(be), cos(ga), cos(th1), cos(th2)
    S2b, S2g, S2t2 = sin(2 * be), sin(2 * ga), sin(2 * th2)

    e1 = (It*add + A1*add*Cb**2 + A2*add*Cg**2 + d**2*add*m + 2*d**2*ad*t1d*m*C1*C2**2*S1
          + 2*d**2*ad*t2d*m*C1**2*C2*S2
          - A1*ad*bd*S2b - A2*ad*gd*S2g + A3*add*Cb*Cg - d**2*t2dd*m*S1
          + 2*dd*d*ad*m + 2*A4*d*add*Cb*S2 + 2*A5*d*add*Cg*S2 + 2*A4*dd*ad*Cb*S2
          + 2*A5*dd*ad*Cg*S2 - A3*ad*bd*Cg*Sb - A3*ad*gd*Cb*Sg - 2*d**2*t1d*t2d*m*C1
          - d**2*add*m*C1**2*C2**2 + A4*ddd*Cb*C2*S1 + A5*ddd*Cg*C2*S1 - 2*dd*d*t2d*m*S1
          + A4*d*bdd*C2*Sb*S1 - A4*d*t2dd*Cb*S1*S2 + A5*d*gdd*C2*Sg*S1 - A5*d*t2dd*Cg*S1*S2
          - 2*A4*dd*t2d*Cb*S1*S2 - 2*A5*dd*t2d*Cg*S1*S2 + A4*d*bd**2*Cb*C2*S1
          - A4*d*t1d**2*Cb*C2*S1
          - A4*d*t2d**2*Cb*C2*S1 + A5*d*gd**2*Cg*C2*S1 - A5*d*t1d**2*Cg*C2*S1
          - A5*d*t2d**2*Cg*C2*S1
          - 2*dd*d*ad*m*C1**2*C2**2 + 2*d**2*t1d*t2d*m*C1*C2**2 + 2*A4*d*ad*t2d*Cb*C2
          + 2*A5*d*ad*t2d*Cg*C2
          + d**2*t1dd*m*C1*C2*S2 - 2*A4*d*ad*bd*Sb*S2 - 2*A5*d*ad*gd*Sg*S2 + A4*d*t1dd*Cb*C1*C2
          + A5*d*t1dd*Cg*C1*C2 + 2*A4*dd*t1d*Cb*C1*C2 + 2*A5*dd*t1d*Cg*C1*C2
          - d**2*t1d**2*m*C2*S1*S2
          - 2*A4*d*t1d*t2d*Cb*C1*S2 - 2*A5*d*t1d*t2d*Cg*C1*S2 + 2*dd*d*t1d*m*C1*C2*S2)

    e2 = (A1*bdd + IB*bdd + (A1*ad**2*S2b)/2 + (A3*ad**2*Cg*Sb)/2 - (A3*gd**2*Cb*Sg)/2
          + (A3*gd**2*Cg*Sb)/2
          + g*lB*m*Cb + (g*lB*mB*Cb)/2 + g*lB*mJ*Cb
          + (A3*gdd*Cb*Cg)/2 - A4*ddd*Sb*S2 + (A3*gdd*Sb*Sg)/2 - A4*d*t2dd*C2*Sb
          - 2*A4*dd*t2d*C2*Sb - A4*ddd*Cb*C1*C2 + A4*d*ad**2*Sb*S2 + A4*d*t2d**2*Sb*S2
          + A4*d*t1dd*Cb*C2*S1 + A4*d*t2dd*Cb*C1*S2
          + 2*A4*dd*t1d*Cb*C2*S1 + 2*A4*dd*t2d*Cb*C1*S2 + A4*d*add*C2*Sb*S1
          + 2*A4*dd*ad*C2*Sb*S1 + A4*d*t1d**2*Cb*C1*C2 + A4*d*t2d**2*Cb*C1*C2
          + 2*A4*d*ad*t1d*C1*C2*Sb - 2*A4*d*t1d*t2d*Cb*S1*S2 - 2*A4*d*ad*t2d*Sb*S1*S2)

    e3 = (A2*gdd + IJ*gdd + (A2*ad**2*S2g)/2 + (A3*ad**2*Cb*Sg)/2 + (A3*bd**2*Cb*Sg)/2
          - (A3*bd**2*Cg*Sb)/2 + g*lJ*m*Cg + (g*lJ*mJ*Cg)/2 + (A3*bdd*Cb*Cg)/2
          - A5*ddd*Sg*S2 + (A3*bdd*Sb*Sg)/2 - A5*d*t2dd*C2*Sg - 2*A5*dd*t2d*C2*Sg
          - A5*ddd*Cg*C1*C2
          + A5*d*ad**2*Sg*S2 + A5*d*t2d**2*Sg*S2 + A5*d*t1dd*Cg*C2*S1 + A5*d*t2dd*Cg*C1*S2
          + 2*A5*dd*t1d*Cg*C2*S1 + 2*A5*dd*t2d*Cg*C1*S2 + A5*d*add*C2*Sg*S1
          + 2*A5*dd*ad*C2*Sg*S1
          + A5*d*t1d**2*Cg*C1*C2 + A5*d*t2d**2*Cg*C1*C2 + 2*A5*d*ad*t1d*C1*C2*Sg
          - 2*A5*d*t1d*t2d*Cg*S1*S2 - 2*A5*d*ad*t2d*Sg*S1*S2)

    e4 = (ddd*m - d*ad**2*m - d*t2d**2*m - A4*ad**2*Cb*S2 - A4*bd**2*Cb*S2 - A5*ad**2*Cg*S2
          - A5*gd**2*Cg*S2 - d*t1d**2*m*C2**2 - A4*bdd*Sb*S2 - A5*gdd*Sg*S2
          - g*m*C1*C2 + d*ad**2*m*C1**2*C2**2 - A4*bdd*Cb*C1*C2 - A5*gdd*Cg*C1*C2
          + A4*add*Cb*C2*S1 + A5*add*Cg*C2*S1 + 2*d*ad*t2d*m*S1 + A4*bd**2*C1*C2*Sb
          + A5*gd**2*C1*C2*Sg - 2*A4*ad*bd*C2*Sb*S1 - 2*A5*ad*gd*C2*Sg*S1
          - 2*d*ad*t1d*m*C1*C2*S2)

    e5 = d*C2*(g*m*S1 - A4*bd**2*Sb*S1 - A5*gd**2*Sg*S1 + d*t1dd*m*C2 + 2*dd*t1d*m*C2
               + A4*add*Cb*C1 + A5*add*Cg*C1 + A4*bdd*Cb*S1 + A5*gdd*Cg*S1 - 2*A4*ad*bd*C1*Sb
               - 2*A5*ad*gd*C1*Sg + d*add*m*C1*S2 + 2*dd*ad*m*C1*S2 - 2*d*t1d*t2d*m*S2
               - d*ad**2*m*C1*C2*S1 + 2*d*ad*t2d*m*C1*C2)

    e6 = -d*(A4*ad**2*Cb*C2 - 2*dd*t2d*m - d*t2dd*m + A4*bd**2*Cb*C2 + A5*ad**2*Cg*C2
             + A5*gd**2*Cg*C2 - (d*t1d**2*m*S2t2)/2 + d*add*m*S1 + 2*dd*ad*m*S1 + A4*bdd*C2*Sb
             + A5*gdd*C2*Sg - g*m*C1*S2 + A4*bd**2*C1*Sb*S2 + A5*gd**2*C1*Sg*S2
             - A4*bdd*Cb*C1*S2 - A5*gdd*Cg*C1*S2 + A4*add*Cb*S1*S2 + A5*add*Cg*S1*S2
             + 2*d*ad*t1d*m*C1*C2**2 - 2*A4*ad*bd*Sb*S1*S2 - 2*A5*ad*gd*Sg*S1*S2
             + d*ad**2*m*C1**2*C2*S2)

    return np.array([e1, e2, e3, e4, e5, e6])


def scalar_eom_residual(p: CraneParams, s, qddot, u) -> np.ndarray:
    """Left minus right side of each scalar equation of motion."""
    q, _ = _state(s)
    check_domain(q)
    return eom_lhs(p, s, qddot) - generalized_force(u)


def kinetic_energy_direct(p: CraneParams, s) -> float:
    """Kinetic energy summed body by body from the link and payload velocities."""
    q, qdot = _state(s)
    al, be, ga, d, th1, th2 = q
    ad, bd, gd, dd, t1d, t2d = qdot
    lB, lJ, mB, mJ, m = p.l_b, p.l_j, p.m_b, p.m_j, p.m
    Sa, Sb, Sg, S1, S2 = sin(al), sin(be), sin(ga), sin(th1), sin(th2)
    Ca, Cb, Cg, C1, C2 = cos(al), cos(be), cos(ga), cos(th1), cos(th2)

    boom = 0.125 * mB * ((lB*Cb*Sa*ad + lB*Ca*Sb*bd)**2 + (lB*Ca*Cb*ad - lB*Sa*Sb*bd)**2
                         + lB**2*Cb**2*bd**2)
    jib = 0.5 * mJ * ((lB*Cb*Sa*ad + lB*Ca*Sb*bd + 0.5*lJ*Cg*Sa*ad + 0.5*lJ*Ca*Sg*gd)**2
                      + (lB*Ca*Cb*ad + 0.5*lJ*Ca*Cg*ad - lB*Sa*Sb*bd - 0.5*lJ*Sa*Sg*gd)**2
                      + (lB*Cb*bd + 0.5*lJ*Cg*gd)**2)
    payload = 0.5 * m * (
        (C2*Sa*S1*dd - Ca*S2*dd + lB*Cb*Sa*ad + lB*Ca*Sb*bd + lJ*Cg*Sa*ad + lJ*Ca*Sg*gd
         - Ca*C2*t2d*d + Sa*S2*ad*d + Ca*C2*S1*ad*d + C1*C2*Sa*t1d*d - Sa*S1*S2*t2d*d)**2
        + (lB*Cb*bd - C1*C2*dd + lJ*Cg*gd + C2*S1*t1d*d + C1*S2*t2d*d)**2
        + (Sa*S2*dd + lB*Ca*Cb*ad + lJ*Ca*Cg*ad - lB*Sa*Sb*bd - lJ*Sa*Sg*gd + Ca*S2*ad*d
           + C2*Sa*t2d*d + Ca*C2*S1*dd + Ca*C1*C2*t1d*d - C2*Sa*S1*ad*d - Ca*S1*S2*t2d*d)**2)
    rotation = 0.5 * p.I_tot * ad**2 + 0.5 * p.I_b * bd**2 + 0.5 * p.I_j * gd**2
    return boom + jib + payload + rotation
