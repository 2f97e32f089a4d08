"""Command-line front end: ``knuckle-crane {simulate,compare,verify}``.

Exit codes: 0 success, 1 configuration error, 2 runtime error (domain
violation, singular mass matrix, Riccati failure, unwritable output),
3 property-suite failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .config import config_to_dict, load_config
from .controllers import RiccatiError
from .model import COORDINATES, INPUTS, ConfigError, CraneError
from .scenarios import SCENARIOS, preset
from .simulation import Controller, SimulationAborted, metrics, run_scenario

OUT_ENV = "KNUCKLE_CRANE_OUT"

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_PROPERTY = 0, 1, 2, 3


def _add_run_options(sp, controller=True):
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--scenario", type=int, choices=sorted(SCENARIOS), help="preset scenario (default 1)")
    src.add_argument("--config", type=Path, help="config file (.ini/.toml) or a run manifest (.json)")
    if controller:
        sp.add_argument("--controller", choices=[c.value for c in Controller])
    sp.add_argument("--dt", type=float, help="integration step [s]")
    sp.add_argument("--t-final", type=float, dest="t_final", help="simulated duration [s]")
    sp.add_argument("--seed", type=int, help="random seed for measurement noise")
    sp.add_argument("--out", type=Path, help=f"output directory (default ${OUT_ENV} or the current directory)")


def build_parser():
    parser = argparse.ArgumentParser(prog="knuckle-crane", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario and write its trajectory")
    _add_run_options(sim)
    sim.add_argument("--plot", action="store_true", help="also write SVG figures")

    cmp_ = sub.add_parser("compare", help="run a scenario under both controllers")
    _add_run_options(cmp_, controller=False)
    cmp_.add_argument("--no-plot", dest="plot", action="store_false", help="skip the overlay figures")

    ver = sub.add_parser("verify", help="run the structural property suite")
    ver.add_argument("--samples", type=int, default=1000)
    ver.add_argument("--seed", type=int, default=0)
    return parser


def _resolve(args, controller=None):
    if args.config is not None:
        cfg = load_config(args.config)
        replayed = _manifest_flags(args.config)
    else:
        cfg = preset(args.scenario or 1)
        replayed = {}
    changes = {}
    ctrl = controller or getattr(args, "controller", None)
    if ctrl:
        changes["controller"] = Controller(ctrl)
    if args.dt is not None:
        changes["dt"] = args.dt
    if args.t_final is not None:
        changes["t_final"] = args.t_final
    if args.seed is not None:
        changes["rng_seed"] = args.seed
    return (cfg.replace(**changes) if changes else cfg), replayed


def _manifest_flags(path):
    if Path(path).suffix != ".json":
        return {}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return {"plot": bool(data.get("plot", False))}


def _out_dir(args):
    out = args.out or Path(os.environ.get(OUT_ENV, "."))
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from None
    if not os.access(out, os.W_OK):
        raise OSError(f"output directory {out} is not writable")
    return out


def _write_manifest(path, command, cfg, outputs, started, extra):
    manifest = {
        "artifact": "knuckle-crane",
        "version": __version__,
        "command": command,
        "config": config_to_dict(cfg),
        "seeds": {"rng_seed": int(cfg.rng_seed),
                  "noise_seed": None if cfg.noise is None else int(cfg.noise.seed)},
        "outputs": [str(p) for p in outputs],
        "wall_clock_s": round(time.perf_counter() - started, 3),
    }
    manifest.update(extra)
    Path(path).write_text(json.dumps(manifest, indent=2, allow_nan=True) + "\n", encoding="utf-8")
    return path


def _fmt(v, unit=""):
    if v is None:
        return "did not settle"
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return f"{v:.4g}{unit}"


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    cfg, replayed = _resolve(args)
    plot = args.plot or replayed.get("plot", False)
    out = _out_dir(args)
    log = run_scenario(cfg)
    csv_path = out / "trajectory.csv"
    log.to_csv(csv_path)
    outputs = [csv_path]
    report = metrics(log, cfg.setpoint)
    if plot:
        from .plotting import plot_run
        from .simulation import TrajectoryLog
        outputs += plot_run({cfg.controller.value: TrajectoryLog.from_csv(csv_path)}, cfg.setpoint, out)
    manifest = _write_manifest(out / "manifest.json", "simulate", cfg, outputs, started,
                               {"plot": bool(plot), "metrics": report.to_dict()})
    print(f"wrote {len(log)} rows to {csv_path}")
    for name in COORDINATES[:4]:
        print(f"  settling {name:<6} {_fmt(report.settling_time[name], ' s')}")
    sw = report.residual_swing
    print(f"  residual swing theta1 {math.degrees(sw['theta1']):.3f} deg, theta2 {math.degrees(sw['theta2']):.3f} deg")
    print(f"  V(0) = {report.V0:.6g}, V(end) = {report.final_V:.6g}")
    print(f"manifest: {manifest}")
    return EXIT_OK


def _compare_row(label, report, status):
    row = {"controller": label, "status": status}
    for name in COORDINATES[:4]:
        row[f"settle_{name}_s"] = report.settling_time[name] if report else None
    for name in ("theta1", "theta2"):
        row[f"residual_{name}_deg"] = math.degrees(report.residual_swing[name]) if report else None
    for name in INPUTS:
        row[f"peak_{name}"] = report.peak_input[name] if report else None
    for name in COORDINATES[:4]:
        row[f"final_error_{name}"] = report.final_error[name] if report else None
    row["t_end_s"] = report.t_final if report else None
    return row


def cmd_compare(args) -> int:
    started = time.perf_counter()
    cfg, replayed = _resolve(args, controller="pd")
    plot = args.plot
    out = _out_dir(args)
    runs, rows, outputs, failures = {}, [], [], []
    for ctrl in (Controller.PD, Controller.LQR):
        c = cfg.replace(controller=ctrl)
        try:
            log = run_scenario(c, keep_partial=True)
            status = "completed"
        except RiccatiError as exc:
            print(f"error: Riccati solver failed for the LQR design: {exc}", file=sys.stderr)
            failures.append(f"riccati: {exc}")
            rows.append(_compare_row(ctrl.value, None, "riccati failure"))
            continue
        except SimulationAborted as exc:
            log = exc.log
            status = f"aborted: {exc.cause}"
            failures.append(f"{ctrl.value}: {exc.cause}")
        path = out / f"{ctrl.value}.csv"
        log.to_csv(path)
        outputs.append(path)
        runs[ctrl.value] = log
        report = metrics(log, c.setpoint) if len(log) else None
        rows.append(_compare_row(ctrl.value, report, status))

    table = out / "metrics.csv"
    keys = list(rows[0])
    lines = [",".join(keys)]
    for row in rows:
        lines.append(",".join("" if row[k] is None else (repr(row[k]) if isinstance(row[k], float) else str(row[k]))
                              .replace(",", ";") for k in keys))
    table.write_text("\n".join(lines) + "\n", encoding="utf-8")
    outputs.append(table)
    if plot and runs:
        from .plotting import plot_run
        from .simulation import TrajectoryLog
        reread = {k: TrajectoryLog.from_csv(out / f"{k}.csv") for k in runs}
        outputs += plot_run(reread, cfg.setpoint, out, prefix="compare_")

    degradation = _degradation(rows)
    _write_manifest(out / "manifest.json", "compare", cfg, outputs, started,
                    {"plot": bool(plot), "comparison": rows, "degradation": degradation, "failures": failures})
    _print_table(rows)
    if degradation:
        print("steady-state tracking error |e| (LQR vs PD):")
        for name, (lqr, pd) in degradation.items():
            worse = "larger" if lqr > pd else "not larger"
            print(f"  {name:<6} {lqr:.4g} vs {pd:.4g}  ({worse} under LQR)")
    if failures:
        for f in failures:
            print(f"error: {f}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _degradation(rows):
    by = {r["controller"]: r for r in rows}
    pd, lqr = by.get("pd"), by.get("lqr")
    if not pd or not lqr or pd["status"] != "completed" or lqr["status"] != "completed":
        return {}
    return {name: (abs(lqr[f"final_error_{name}"]), abs(pd[f"final_error_{name}"])) for name in COORDINATES[:4]}


def _print_table(rows):
    cols = [("controller", "ctrl"), ("settle_alpha_s", "T_alpha"), ("settle_beta_s", "T_beta"),
            ("settle_gamma_s", "T_gamma"), ("settle_d_s", "T_d"), ("residual_theta1_deg", "th1_res"),
            ("residual_theta2_deg", "th2_res"), ("peak_u2", "peak_u2"), ("peak_u4", "peak_u4"), ("status", "status")]
    print("  ".join(f"{h:>10}" for _, h in cols))
    for row in rows:
        cells = []
        for k, _ in cols:
            v = row[k]
            cells.append(f"{v:>10}" if isinstance(v, str) else f"{_fmt(v):>10}")
        print("  ".join(cells))


def cmd_verify(args) -> int:
    from .verify import run_property_suite

    if args.samples < 1:
        raise ConfigError("--samples must be at least 1")
    report = run_property_suite(samples=args.samples, seed=args.seed)
    print(f"property suite: {report.samples} samples, seed {report.seed}")
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_PROPERTY


COMMANDS = {"simulate": cmd_simulate, "compare": cmd_compare, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RiccatiError as exc:
        print(f"error: Riccati solver failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except CraneError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
