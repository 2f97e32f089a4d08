"""Randomized structural checks of the dynamics.

Each check samples admissible states from a fixed box (swing, luff angles
within 80 degrees, cable length 0.1 to 10 m) and records the worst deviation
together with the state where it occurred.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as _k
from .dynamics import coriolis_matrix, forward_dynamics, gravity_from_potential, gravity_vector, mass_matrix
from .energy import energy_E, energy_rate
from .model import CraneParams, generalized_force
from .scalar_eom import eom_lhs

LIMIT = np.radians(80.0)

THRESHOLDS = {
    "skew_symmetry": 1e-8,
    "gravity_gradient": 1e-6,
    "scalar_equivalence": 1e-8,
    "mass_positive_definite": 0.0,
    "gravity_alpha_zero": 0.0,
    "energy_rate": 1e-6,
}


@dataclass
class PropertyResult:
    name: str
    threshold: float
    worst: float = 0.0
    worst_state: np.ndarray | None = None
    passed: bool = True
    detail: str = ""

    def record(self, value, state):
        if value > self.worst or self.worst_state is None:
            self.worst = float(value)
            self.worst_state = np.array(state, dtype=float)


@dataclass
class SuiteReport:
    samples: int
    seed: int
    results: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def by_name(self, name) -> PropertyResult:
        return next(r for r in self.results if r.name == name)

    def lines(self):
        out = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            out.append(f"{status} {r.name:<24} worst={r.worst:.3e} threshold={r.threshold:.1e} {r.detail}".rstrip())
            if not r.passed and r.worst_state is not None:
                out.append("     worst state x = " + np.array2string(r.worst_state, precision=6, max_line_width=200))
        return out


def sample_states(n, seed=0):
    """``n`` random admissible ``(q, qdot)`` pairs from the property-test box."""
    rng = np.random.default_rng(seed)
    q = np.empty((n, 6))
    q[:, 0] = rng.uniform(-np.pi, np.pi, n)
    q[:, [1, 2, 4, 5]] = rng.uniform(-LIMIT, LIMIT, (n, 4))
    q[:, 3] = rng.uniform(0.1, 10.0, n)
    qdot = rng.uniform(-1.0, 1.0, (n, 6))
    return q, qdot, rng


def _mdot_extended(p, q, qdot, h=1e-6):
    """Central difference of ``M`` along the flow, evaluated in long double.

    In double precision the difference quotient carries a round-off floor of
    about ``eps * |M| / h`` (a few 1e-7 here), above the tolerance being
    tested, so the uncompiled kernel is run in extended precision instead.
    """
    P = p.vector.astype(np.longdouble)
    q = np.asarray(q, dtype=np.longdouble)
    v = np.asarray(qdot, dtype=np.longdouble)
    h = np.longdouble(h)
    return (_k.mass.py_func(P, q + h * v) - _k.mass.py_func(P, q - h * v)) / (2 * h)


def run_property_suite(p: CraneParams | None = None, samples=1000, seed=0, coriolis=None) -> SuiteReport:
    """Evaluate all structural properties on ``samples`` random states.

    ``coriolis(p, q, qdot)`` replaces the production Coriolis matrix, which
    lets tests confirm that a corrupted entry is caught.
    """
    p = p or CraneParams()
    coriolis = coriolis or coriolis_matrix
    q_all, qd_all, rng = sample_states(samples, seed)

    skew = PropertyResult("skew_symmetry", THRESHOLDS["skew_symmetry"])
    grad = PropertyResult("gravity_gradient", THRESHOLDS["gravity_gradient"])
    scal = PropertyResult("scalar_equivalence", THRESHOLDS["scalar_equivalence"])
    spd = PropertyResult("mass_positive_definite", THRESHOLDS["mass_positive_definite"])
    g0 = PropertyResult("gravity_alpha_zero", THRESHOLDS["gravity_alpha_zero"])
    erate = PropertyResult("energy_rate", THRESHOLDS["energy_rate"])
    min_eig = np.inf
    asym = 0.0

    for q, qd in zip(q_all, qd_all):
        x = np.concatenate([q, qd])
        eta = rng.standard_normal(6)
        u = rng.uniform(-1e4, 1e4, 4)

        C = np.asarray(coriolis(p, q, qd), dtype=np.longdouble)
        N = 0.5 * _mdot_extended(p, q, qd) - C
        skew.record(float(abs(eta @ N @ eta)) / float(eta @ eta), x)

        gv = gravity_vector(p, q)
        gfd = gravity_from_potential(p, (q, qd))
        grad.record(np.linalg.norm(gv - gfd) / np.linalg.norm(gv), x)
        g0.record(abs(gv[0]), x)

        M = mass_matrix(p, q)
        asym = max(asym, float(np.abs(M - M.T).max()))
        lam = float(np.linalg.eigvalsh(M).min())
        if lam < min_eig:
            min_eig = lam
            spd.worst_state = x
        # scalar equations, with the matrix form built from the tested C
        qdd = np.linalg.solve(M, generalized_force(u) - C.astype(float) @ qd - gv)
        lhs = eom_lhs(p, (q, qd), qdd)
        zeta = generalized_force(u)
        scale = np.abs(zeta).max() + np.abs(gv).max() + 1.0
        scal.record(np.abs(lhs - zeta).max() / scale, x)

        qdd_true = forward_dynamics(p, (q, qd), u)
        xdot = np.concatenate([qd, qdd_true])
        h = 1e-6
        xp, xm = x + h * xdot, x - h * xdot
        fd = (energy_E(p, (xp[:6], xp[6:])) - energy_E(p, (xm[:6], xm[6:]))) / (2 * h)
        an = energy_rate(p, (q, qd), u)
        erate.record(abs(fd - an) / max(1.0, abs(an)), x)

    for r in (skew, grad, scal, g0, erate):
        r.passed = r.worst <= r.threshold
    spd.worst = min_eig
    spd.passed = bool(min_eig > 0.0 and asym == 0.0)
    spd.detail = f"(min eigenvalue {min_eig:.3e}, max asymmetry {asym:.1e})"
    spd.threshold = 0.0
    return SuiteReport(samples, seed, [skew, grad, scal, spd, g0, erate])
