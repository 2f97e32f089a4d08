"""The five reference scenarios.

All start from rest with the boom and jib level, the tower at zero slew and
one metre of cable, and regulate to alpha 60 deg, beta 30 deg, gamma 22 deg,
d 2 m.
"""

from __future__ import annotations

from .model import CraneParams, GeneralizedState
from .simulation import NoiseSpec, ScenarioConfig, WindGust

SCENARIOS = {
    1: "nominal parameters, no initial swing",
    2: "initial swing theta1 = 0.2 rad, theta2 = 0.1 rad",
    3: "plant payload 50 kg, controller assumes 100 kg",
    4: "50 N horizontal wind gust on the payload at t = 30 s for 1 s",
    5: "measurement noise: 0.05 deg on angles, 1 mm on cable length",
}


def preset(number: int, **overrides) -> ScenarioConfig:
    """Scenario configuration ``number`` (1 to 5), with field overrides."""
    base = ScenarioConfig()
    if number == 1:
        cfg = base
    elif number == 2:
        cfg = base.replace(initial_state=GeneralizedState([0.0, 0.0, 0.0, 1.0, 0.2, 0.1]))
    elif number == 3:
        cfg = base.replace(plant_params=CraneParams(m=50.0))
    elif number == 4:
        cfg = base.replace(disturbances=(WindGust(),))
    elif number == 5:
        cfg = base.replace(noise=NoiseSpec())
    else:
        from .model import ConfigError
        raise ConfigError(f"scenario must be 1..5, got {number!r}")
    return cfg.replace(**overrides) if overrides else cfg
