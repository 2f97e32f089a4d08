"""Static SVG line charts of logged trajectories.

Output depends only on the trajectory values and the setpoint: the SVG hash
salt is pinned and the date metadata is dropped, so identical inputs give
byte-identical files. Angles are drawn in degrees.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .model import Setpoint  # noqa: E402
from .simulation import TrajectoryLog  # noqa: E402

MAX_POINTS = 4000
_RC = {"svg.hashsalt": "knuckle-crane", "svg.fonttype": "path", "figure.dpi": 100}
_META = {"Date": None, "Creator": None}

ACTUATED = (("alpha", "Tower angle alpha [deg]", True), ("beta", "Boom angle beta [deg]", True),
            ("gamma", "Jib angle gamma [deg]", True), ("d", "Rope length d [m]", False))


def _stride(n):
    return max(1, int(np.ceil(n / MAX_POINTS)))


def _thin(log: TrajectoryLog):
    k = _stride(len(log))
    idx = np.arange(0, len(log), k)
    if idx[-1] != len(log) - 1:
        idx = np.append(idx, len(log) - 1)
    return idx


def _save(fig, path):
    path = Path(path)
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)
    return path


def plot_actuated(runs: dict, sp: Setpoint, path):
    """Actuated coordinates of one or more labelled runs against the reference."""
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(2, 2, figsize=(10, 6), sharex=True)
        targets = sp.actuated
        for ax, (i, (name, label, angle)) in zip(axes.flat, enumerate(ACTUATED)):
            scale = np.degrees(1.0) if angle else 1.0
            for run_label, log in runs.items():
                idx = _thin(log)
                ax.plot(log.t[idx], log.q[idx, i] * scale, label=run_label, lw=1.0)
            ax.axhline(targets[i] * scale, color="tab:red", ls="--", lw=0.8, label="reference")
            ax.set_ylabel(label)
            ax.grid(alpha=0.3)
        for ax in axes[1]:
            ax.set_xlabel("time [s]")
        axes[0, 0].legend(loc="best", fontsize=8)
        fig.tight_layout()
        return _save(fig, path)


def plot_swing(runs: dict, path):
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(2, 1, figsize=(10, 5), sharex=True)
        for ax, i, label in ((axes[0], 4, "theta1 [deg]"), (axes[1], 5, "theta2 [deg]")):
            for run_label, log in runs.items():
                idx = _thin(log)
                ax.plot(log.t[idx], np.degrees(log.q[idx, i]), label=run_label, lw=1.0)
            ax.set_ylabel(label)
            ax.grid(alpha=0.3)
        axes[1].set_xlabel("time [s]")
        axes[0].legend(loc="best", fontsize=8)
        fig.tight_layout()
        return _save(fig, path)


def plot_inputs(runs: dict, path):
    """Slew and boom torques on top, jib torque and hoist force below."""
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(2, 1, figsize=(10, 5), sharex=True)
        for ax, cols in ((axes[0], (0, 1)), (axes[1], (2, 3))):
            for run_label, log in runs.items():
                idx = _thin(log)
                for c in cols:
                    name = f"u{c + 1}" if len(runs) == 1 else f"u{c + 1} {run_label}"
                    ax.plot(log.t[idx], log.u[idx, c], label=name, lw=1.0)
            ax.grid(alpha=0.3)
            ax.legend(loc="best", fontsize=8)
        axes[0].set_ylabel("u1 [N m], u2 [N m]")
        axes[1].set_ylabel("u3 [N m], u4 [N]")
        axes[1].set_xlabel("time [s]")
        fig.tight_layout()
        return _save(fig, path)


def plot_run(runs: dict, sp: Setpoint, out_dir, prefix=""):
    """Write the three figure families; returns the file paths."""
    out_dir = Path(out_dir)
    return [
        plot_actuated(runs, sp, out_dir / f"{prefix}actuated.svg"),
        plot_swing(runs, out_dir / f"{prefix}swing.svg"),
        plot_inputs(runs, out_dir / f"{prefix}inputs.svg"),
    ]
