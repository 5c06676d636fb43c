"""Two-country bank portfolio equilibrium simulator.

Developed-country banks choose what fraction of their funds to lend
internationally; developing-country banks choose what fraction of their
funding to raise internationally. Closed-form policies from quadratic value
functions feed per-period clearing of the international loan market and the
foreign-exchange market; a seeded multi-period driver and a comparative-
experiment harness sit on top.
"""
from ._backend import BACKEND
from .coeffs import (
    BorrowerCoeffs,
    LenderCoeffs,
    solve_borrower,
    solve_c,
    solve_lender,
    solve_z,
)
from .equilibrium import (
    EquilibriumResult,
    PeriodState,
    net_exports,
    solve_exchange_rate,
    solve_interest_rate,
    solve_period,
)
from .errors import (
    BracketEmpty,
    CapinflowError,
    ComplexRoots,
    ConfigError,
    EmptySeries,
    FeasibilityError,
    InfeasibleMoments,
    LengthMismatch,
    MaxIterationsExceeded,
    NonPositiveFunds,
    NoNegativeRoot,
    NoSignChange,
    OutOfUnitInterval,
    PeriodError,
    RootCountViolation,
)
from .experiments import (
    PRESETS,
    ComparativeRun,
    SeriesSummary,
    comparative,
    comparative_preset,
    difference_series,
    summarize,
    sweep,
)
from .feasibility import FeasibilityReport, rate_bracket, validate
from .params import (
    BASELINE_MOMENTS,
    BASELINE_PARAMS,
    ModelParams,
    ShockMoments,
    apply_overrides,
    load_config,
    write_config,
)
from .policy import PolicyInputs, lambda_star, lambda_star_raw, mu_star, mu_star_raw
from .shocks import ShockDraw, ShockStreams, TwoPointDist, draw_period, two_point_from_moments
from .simulate import (
    SimulationSeries,
    evolve_borrower_funds,
    evolve_lender_funds,
    run,
    write_plot_script,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BASELINE_MOMENTS",
    "BASELINE_PARAMS",
    "BorrowerCoeffs",
    "BracketEmpty",
    "CapinflowError",
    "ComparativeRun",
    "ComplexRoots",
    "ConfigError",
    "EmptySeries",
    "EquilibriumResult",
    "FeasibilityError",
    "FeasibilityReport",
    "InfeasibleMoments",
    "LenderCoeffs",
    "LengthMismatch",
    "MaxIterationsExceeded",
    "ModelParams",
    "NonPositiveFunds",
    "NoNegativeRoot",
    "NoSignChange",
    "OutOfUnitInterval",
    "PRESETS",
    "PeriodError",
    "PeriodState",
    "PolicyInputs",
    "RootCountViolation",
    "SeriesSummary",
    "ShockDraw",
    "ShockMoments",
    "ShockStreams",
    "SimulationSeries",
    "TwoPointDist",
    "apply_overrides",
    "comparative",
    "comparative_preset",
    "difference_series",
    "draw_period",
    "evolve_borrower_funds",
    "evolve_lender_funds",
    "lambda_star",
    "lambda_star_raw",
    "load_config",
    "mu_star",
    "mu_star_raw",
    "net_exports",
    "rate_bracket",
    "run",
    "solve_borrower",
    "solve_c",
    "solve_exchange_rate",
    "solve_interest_rate",
    "solve_lender",
    "solve_period",
    "solve_z",
    "summarize",
    "sweep",
    "two_point_from_moments",
    "validate",
    "write_config",
    "write_plot_script",
]
