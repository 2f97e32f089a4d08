"""Scenario configuration files.

The format is sectioned ``key = value`` text read with :mod:`configparser`.
TOML-style quoting and ``[a, b, c]`` lists are accepted, so simple
``.toml`` files work too. Angles are in radians, everything else in SI.

Example::

    [scenario]
    preset = 3
    controller = pd
    dt = 0.001
    t_final = 150

    [plant]
    m = 50

    [wind]
    t_start = 30
    duration = 1
    force_world = 50, 0, 0
"""

from __future__ import annotations

import configparser
import json
import math
from dataclasses import fields
from pathlib import Path

import numpy as np

from .controllers import LqrWeights
from .model import ConfigError, ControlGains, CraneParams, GeneralizedState, Setpoint
from .simulation import Controller, NoiseSpec, ScenarioConfig, WindGust

SCENARIO_KEYS = ("preset", "controller", "dt", "t_final", "rng_seed")


def _unquote(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def _number(where, text, integer=False):
    text = _unquote(str(text))
    try:
        value = int(text) if integer else float(text)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {text!r}") from None
    if not integer and not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite, got {text!r}")
    return value


def _vector(where, text, length=None):
    body = _unquote(str(text)).strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = [s for s in (t.strip() for t in body.split(",")) if s]
    values = [_number(where, s) for s in parts]
    if length is not None and len(values) != length:
        raise ConfigError(f"{where}: expected {length} comma-separated numbers, got {len(values)}")
    return values


def _dataclass_from(section, cls, base, values: dict):
    known = {f.name for f in fields(cls)}
    changes = {}
    for key, raw in values.items():
        if key not in known:
            raise ConfigError(f"[{section}] unknown key {key!r}")
        changes[key] = _number(f"[{section}] {key}", raw)
    current = {f.name: getattr(base, f.name) for f in fields(cls)}
    current.update(changes)
    try:
        return cls(**current)
    except ConfigError as exc:
        raise ConfigError(f"[{section}] {exc}") from None


def config_from_sections(sections: dict) -> ScenarioConfig:
    """Build a validated :class:`ScenarioConfig` from ``{section: {key: value}}``."""
    from .scenarios import preset

    sections = {name.strip().lower(): dict(body) for name, body in sections.items()}
    scen = sections.pop("scenario", {})
    for key in scen:
        if key not in SCENARIO_KEYS:
            raise ConfigError(f"[scenario] unknown key {key!r}")
    number = _number("[scenario] preset", scen.get("preset", 1), integer=True)
    try:
        base = preset(number)
    except ConfigError as exc:
        raise ConfigError(f"[scenario] preset: {exc}") from None
    changes = {}
    if "controller" in scen:
        try:
            changes["controller"] = Controller(_unquote(scen["controller"]).lower())
        except ValueError:
            raise ConfigError(f"[scenario] controller must be 'pd' or 'lqr', got {scen['controller']!r}") from None
    if "dt" in scen:
        changes["dt"] = _number("[scenario] dt", scen["dt"])
    if "t_final" in scen:
        changes["t_final"] = _number("[scenario] t_final", scen["t_final"])
    if "rng_seed" in scen:
        changes["rng_seed"] = _number("[scenario] rng_seed", scen["rng_seed"], integer=True)

    plant = base.plant_params
    if "plant" in sections:
        plant = _dataclass_from("plant", CraneParams, plant, sections.pop("plant"))
        changes["plant_params"] = plant
    if "nominal" in sections:
        changes["nominal_params"] = _dataclass_from("nominal", CraneParams, base.nominal_params,
                                                    sections.pop("nominal"))
    if "setpoint" in sections:
        changes["setpoint"] = _dataclass_from("setpoint", Setpoint, base.setpoint, sections.pop("setpoint"))
    if "gains" in sections:
        changes["gains"] = _dataclass_from("gains", ControlGains, base.gains, sections.pop("gains"))

    if "initial_state" in sections:
        body = sections.pop("initial_state")
        for key in body:
            if key not in ("q", "qdot"):
                raise ConfigError(f"[initial_state] unknown key {key!r}")
        q = _vector("[initial_state] q", body["q"], 6) if "q" in body else base.initial_state.q
        qd = _vector("[initial_state] qdot", body["qdot"], 6) if "qdot" in body else base.initial_state.qdot
        changes["initial_state"] = GeneralizedState(q, qd)

    if "lqr" in sections:
        body = sections.pop("lqr")
        for key in body:
            if key not in ("q_diag", "r_diag"):
                raise ConfigError(f"[lqr] unknown key {key!r}")
        default = base.lqr_weights or LqrWeights.default()
        Q = _vector("[lqr] q_diag", body["q_diag"], 12) if "q_diag" in body else np.diag(default.Q)
        R = _vector("[lqr] r_diag", body["r_diag"], 4) if "r_diag" in body else np.diag(default.R)
        try:
            changes["lqr_weights"] = LqrWeights(np.asarray(Q), np.asarray(R))
        except ConfigError as exc:
            raise ConfigError(f"[lqr] {exc}") from None

    if "noise" in sections:
        body = sections.pop("noise")
        if str(body.get("enabled", "true")).strip().lower() in ("false", "0", "no", "off"):
            changes["noise"] = None
        else:
            body = {k: v for k, v in body.items() if k != "enabled"}
            for key in body:
                if key not in ("sigma_angles", "sigma_d", "seed"):
                    raise ConfigError(f"[noise] unknown key {key!r}")
            cur = base.noise or NoiseSpec()
            try:
                changes["noise"] = NoiseSpec(
                    sigma_angles=_number("[noise] sigma_angles", body.get("sigma_angles", cur.sigma_angles)),
                    sigma_d=_number("[noise] sigma_d", body.get("sigma_d", cur.sigma_d)),
                    seed=_number("[noise] seed", body.get("seed", cur.seed), integer=True),
                )
            except ConfigError as exc:
                raise ConfigError(f"[noise] {exc}") from None

    gusts = []
    for name in sorted(k for k in sections if k == "wind" or k.startswith("wind.")):
        body = sections.pop(name)
        for key in body:
            if key not in ("t_start", "duration", "force_world"):
                raise ConfigError(f"[{name}] unknown key {key!r}")
        try:
            gusts.append(WindGust(
                t_start=_number(f"[{name}] t_start", body.get("t_start", 30.0)),
                duration=_number(f"[{name}] duration", body.get("duration", 1.0)),
                force_world=_vector(f"[{name}] force_world", body.get("force_world", "50, 0, 0"), 3),
            ))
        except ConfigError as exc:
            raise ConfigError(f"[{name}] {exc}") from None
    if gusts:
        changes["disturbances"] = tuple(gusts)

    if sections:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(sections))}")
    try:
        return base.replace(**changes)
    except ConfigError as exc:
        raise ConfigError(f"[scenario] {exc}") from None


def load_config(path) -> ScenarioConfig:
    """Read an INI/TOML-style config file, or the ``config`` block of a run manifest."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return config_from_dict(data.get("config", data))
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_sections({s: dict(parser[s]) for s in parser.sections()})


def _params_dict(p: CraneParams):
    return {f.name: float(getattr(p, f.name)) for f in fields(p)}


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """Fully resolved, JSON-friendly form of ``cfg``; inverse of :func:`config_from_dict`."""
    weights = cfg.lqr_weights
    return {
        "scenario": {"controller": cfg.controller.value, "dt": cfg.dt, "t_final": cfg.t_final,
                     "rng_seed": int(cfg.rng_seed)},
        "setpoint": {f.name: float(getattr(cfg.setpoint, f.name)) for f in fields(Setpoint)},
        "initial_state": {"q": cfg.initial_state.q.tolist(), "qdot": cfg.initial_state.qdot.tolist()},
        "plant": _params_dict(cfg.plant_params),
        "nominal": _params_dict(cfg.nominal_params),
        "gains": {f.name: float(getattr(cfg.gains, f.name)) for f in fields(ControlGains)},
        "lqr": None if weights is None else {"q_diag": np.diag(weights.Q).tolist(),
                                             "r_diag": np.diag(weights.R).tolist()},
        "noise": None if cfg.noise is None else {"sigma_angles": cfg.noise.sigma_angles,
                                                 "sigma_d": cfg.noise.sigma_d, "seed": int(cfg.noise.seed)},
        "wind": [{"t_start": g.t_start, "duration": g.duration, "force_world": list(g.force_world)}
                 for g in cfg.disturbances],
    }


def config_from_dict(d: dict) -> ScenarioConfig:
    try:
        scen = d["scenario"]
        weights = d.get("lqr")
        noise = d.get("noise")
        return ScenarioConfig(
            setpoint=Setpoint(**d["setpoint"]),
            initial_state=GeneralizedState(d["initial_state"]["q"], d["initial_state"]["qdot"]),
            plant_params=CraneParams(**d["plant"]),
            nominal_params=CraneParams(**d["nominal"]),
            controller=Controller(scen["controller"]),
            gains=ControlGains(**d["gains"]),
            lqr_weights=None if weights is None else LqrWeights(np.asarray(weights["q_diag"]),
                                                                np.asarray(weights["r_diag"])),
            disturbances=tuple(WindGust(**g) for g in d.get("wind", [])),
            noise=None if noise is None else NoiseSpec(**noise),
            dt=scen["dt"],
            t_final=scen["t_final"],
            rng_seed=scen["rng_seed"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed resolved config: {exc!r}") from None
