"""Kuramoto oscillator networks driven by a pacemaker.

Thin python surface over the C++ core: trajectory integration, spectral
rate bounds, sufficient-condition checks, and the sweep/trapping
experiment harness.
"""

from ._core import (
    ConditionVerdict,
    ConfigError,
    CouplingGraph,
    ExperimentKind,
    ExperimentSpec,
    IncidenceRepresentation,
    IntegrationError,
    IntegratorConfig,
    ModelParams,
    MultiplierStats,
    RateBound,
    RateKind,
    SincConstants,
    SweepResult,
    Trajectory,
    TrappingPoint,
    TrappingResult,
    alpha1,
    alpha2,
    alpha3,
    alpha4,
    build_incidence,
    check_locking_condition,
    check_sync_condition,
    check_trapping_condition,
    fit_decay_rate,
    full_phase_rhs,
    integrate,
    is_connected,
    laplacian,
    load_experiment,
    load_experiment_file,
    lyapunov_diagnostics,
    order_parameter,
    relative_phase_rhs,
    run_sweep,
    run_trapping,
    sigma_pair_sync,
    sinc,
    solve_epsilon0,
    symmetric_eigen_extremes,
    time_to_lock,
    time_to_sync,
    wrap_phase,
)

__all__ = [name for name in dir() if not name.startswith("_")]
