"""Hydrogen loading, storage and curing planner for UV photonic crystal
fiber patch cords."""

__version__ = "0.1.0"

from .bessel import j0, j0_zero, j0_zeros, j1
from .diffusion import (
    LMA_PM_10,
    ConcentrationField,
    DiffusionScenario,
    Direction,
    FiberSpec,
    GasConditions,
    GeometryCase,
    InitialState,
    LoadingPlan,
    Optimum,
    OptimizerGrid,
    TemperatureSchedule,
    c_in,
    c_out,
    concentration,
    equivalent_time,
    invert_time,
    loading_plan,
    optimize_conditions,
    scale_time,
    schedule_concentration,
    storage_time,
    theta,
    time_to_fraction,
)
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DataError,
    DomainError,
    InfeasibleError,
    NumericError,
    PlannerError,
    RangeError,
    UsageError,
)
from .guidance import (
    BendModelParams,
    IndexData,
    ModeCheck,
    bend_loss_curve,
    critical_bend_radius,
    knee_radius,
    v_number,
    v_pcf,
)
from .material import (
    DEFAULT_MATERIAL,
    DiffusivityModel,
    Material,
    SolubilityParams,
    absolute_concentration,
    diffusivity,
    solubility,
)
from .oracle_fd import FdConfig, compare_with_series, fd_solve, richardson_ratio
from .units import Quantity, constants, from_si, parse_quantity, to_si
