"""Delay-minimal uplink offloading for a two-user NOMA-assisted MEC system."""

__version__ = "0.1.0"

from .auxiliary import MU_INF, MuPoint, allocate, eval_f, eval_f_second, objective_terms
from .experiments import (
    SWEEP_COLUMNS,
    TRACE_COLUMNS,
    SweepRow,
    SweepSpec,
    TraceComparison,
    convergence_trace,
    energy_sweep,
    write_sweep_csv,
    write_trace_csv,
)
from .model import (
    Allocation,
    DerivedConstants,
    EnergyRegime,
    Mode,
    SystemParams,
    classify_regime,
    derive_constants,
    instance_from_dict,
    load_instance,
)
from .oracle import GridSpec, grid_min_delay
from .solvers import (
    ConvergenceError,
    InitializationError,
    RegimeError,
    Solution,
    SolverConfig,
    TracePoint,
    matched_init_mu,
    pick_best,
    solve,
    solve_hnoma_dinkelbach,
    solve_hnoma_newton,
    solve_oma,
    solve_pure_noma,
)

__all__ = [
    "MU_INF",
    "MuPoint",
    "allocate",
    "eval_f",
    "eval_f_second",
    "objective_terms",
    "SWEEP_COLUMNS",
    "TRACE_COLUMNS",
    "SweepRow",
    "SweepSpec",
    "TraceComparison",
    "convergence_trace",
    "energy_sweep",
    "write_sweep_csv",
    "write_trace_csv",
    "Allocation",
    "DerivedConstants",
    "EnergyRegime",
    "Mode",
    "SystemParams",
    "classify_regime",
    "derive_constants",
    "instance_from_dict",
    "load_instance",
    "GridSpec",
    "grid_min_delay",
    "ConvergenceError",
    "InitializationError",
    "RegimeError",
    "Solution",
    "SolverConfig",
    "TracePoint",
    "matched_init_mu",
    "pick_best",
    "solve",
    "solve_hnoma_dinkelbach",
    "solve_hnoma_newton",
    "solve_oma",
    "solve_pure_noma",
    "__version__",
]
