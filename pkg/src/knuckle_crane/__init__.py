"""Dynamics, control and simulation of a six-degree-of-freedom knuckle-boom crane."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .controllers import (
    LinearModel,
    LqrWeights,
    RiccatiError,
    design_lqr,
    gravity_compensation,
    linearize,
    lqr_control,
    pd_gravity_control,
    solve_care,
)
from .dynamics import (
    DynamicsTerms,
    assemble_terms,
    coriolis_matrix,
    forward_dynamics,
    gravity_from_potential,
    gravity_vector,
    mass_matrix,
    payload_jacobian,
    payload_position,
    potential_energy,
)
from .energy import (
    ErrorSignals,
    energy_E,
    energy_rate,
    error_signals,
    kinetic_energy,
    lyapunov_V,
    lyapunov_Vdot_analytic,
)
from .model import (
    ConfigError,
    ControlGains,
    CraneError,
    CraneParams,
    DomainViolation,
    GeneralizedState,
    Setpoint,
    SingularMassMatrix,
)
from .scalar_eom import kinetic_energy_direct, scalar_eom_residual
from .scenarios import preset
from .simulation import (
    Controller,
    DisturbanceSpec,
    MetricsReport,
    NoiseSpec,
    ScenarioConfig,
    SimulationAborted,
    TrajectoryLog,
    WindGust,
    metrics,
    rk4_step,
    run_scenario,
    step_rk4,
    wind_generalized_force,
)

__all__ = [name for name in dir() if not name.startswith("_")]
