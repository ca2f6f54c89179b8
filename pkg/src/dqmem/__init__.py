"""Dissipative quantum memory simulator.

Memories are code-labeled condensate vacua over a finite momentum grid.
Dissipation gives each mode a lifetime hierarchy (higher momentum lives
longer), lets many codes coexist, and makes evolution irreversible;
without it every new recording overprints the last.
"""

__version__ = "0.1.0"

from .bank import (
    AssociationResult,
    MemoryBank,
    RecallOutcome,
    RecallResult,
    Stimulus,
    bank_for_grid,
    effective_mass,
)
from .condensate import (
    BalanceReport,
    MemoryCode,
    SqueezeVector,
    balance_residual,
    code_to_squeeze,
    entropy,
    log_overlap,
    overlap,
    squeeze_to_code,
    thermal_code,
)
from .dynamics import (
    Backend,
    LifetimeProfile,
    MemoryState,
    ModeTrajectory,
    RegimeReport,
    Status,
    evolve,
    forget,
    fresh_state,
    infinite_profile,
    is_forgotten,
    lifetime_profile,
    overdamping_crossing_time,
    refresh,
    regime_report,
    solve_mode_equation,
)
from .engine import ScenarioResults, lifetime_table, run_scenario
from .emit import emit, render
from .scenario import ScenarioConfig, load_scenario, parse_scenario
from .spectrum import (
    Damping,
    FrequencySchedule,
    ModeGrid,
    ScheduleKind,
    build_mode_grid,
    competition_ratio,
    constant_schedule,
    domain_size,
    exp_decay_schedule,
    frequency_at,
)

__all__ = [
    "__version__",
    "AssociationResult",
    "Backend",
    "BalanceReport",
    "Damping",
    "FrequencySchedule",
    "LifetimeProfile",
    "MemoryBank",
    "MemoryCode",
    "MemoryState",
    "ModeGrid",
    "ModeTrajectory",
    "RecallOutcome",
    "RecallResult",
    "RegimeReport",
    "ScenarioConfig",
    "ScenarioResults",
    "ScheduleKind",
    "SqueezeVector",
    "Status",
    "Stimulus",
    "balance_residual",
    "bank_for_grid",
    "build_mode_grid",
    "code_to_squeeze",
    "competition_ratio",
    "constant_schedule",
    "domain_size",
    "effective_mass",
    "emit",
    "entropy",
    "evolve",
    "exp_decay_schedule",
    "forget",
    "frequency_at",
    "fresh_state",
    "infinite_profile",
    "is_forgotten",
    "lifetime_profile",
    "lifetime_table",
    "load_scenario",
    "log_overlap",
    "overdamping_crossing_time",
    "overlap",
    "parse_scenario",
    "refresh",
    "regime_report",
    "render",
    "run_scenario",
    "solve_mode_equation",
    "squeeze_to_code",
    "thermal_code",
]
