"""Exception types raised by the simulator."""
from __future__ import annotations


class CapinflowError(Exception):
    """Base class for all library errors."""


class ConfigError(CapinflowError):
    """Malformed configuration input (bad file, unknown key, invalid value)."""


class BracketEmpty(CapinflowError):
    """No admissible international rate: the bracket lower bound meets or
    exceeds the upper bound, so no rate is profitable for both sides."""

    def __init__(self, lo: float, hi: float):
        super().__init__(f"empty rate bracket: lower bound {lo:.6f} >= upper bound {hi:.6f}")
        self.lo = lo
        self.hi = hi


class FeasibilityError(CapinflowError):
    """A simulation was started on a configuration that failed pre-flight checks."""

    def __init__(self, failed: list[str]):
        super().__init__("feasibility checks failed: " + ", ".join(failed))
        self.failed = failed


class InfeasibleMoments(CapinflowError):
    """The requested (mean, variance) pair cannot be realized by a two-point
    distribution on {lo, 1} with lo in [0, 1)."""


class CoefficientError(CapinflowError):
    """Base class for value-function coefficient failures."""


class NoNegativeRoot(CoefficientError):
    """The lender curvature quadratic has no unique negative real root at
    this rate (parameter infeasibility for the lender problem)."""


class RootCountViolation(CoefficientError):
    """The borrower curvature cubic does not have exactly one negative real
    root at this rate (parameter infeasibility for the borrower problem)."""

    def __init__(self, msg: str, n_negative: int = -1):
        super().__init__(msg)
        self.n_negative = n_negative


class OutOfUnitInterval(CapinflowError):
    """A portfolio fraction left (0, 1): a corner solution for the current
    state, outside the interior-solution regime the model covers."""

    def __init__(self, name: str, value: float):
        super().__init__(f"{name} = {value:.6g} is outside (0, 1)")
        self.name = name
        self.value = value


class EquilibriumError(CapinflowError):
    """Base class for per-period market clearing failures."""


class ComplexRoots(EquilibriumError):
    """The FX-market quadratic has no real root (negative discriminant)."""


class NoSignChange(EquilibriumError):
    """The loan-market gap does not change sign over the evaluable part of
    the rate bracket, so no clearing rate can be bracketed."""

    def __init__(self, msg: str, gap_lo: float, gap_hi: float):
        super().__init__(f"{msg} (gap at ends: {gap_lo:.6g}, {gap_hi:.6g})")
        self.gap_lo = gap_lo
        self.gap_hi = gap_hi


class MaxIterationsExceeded(EquilibriumError):
    """The per-period fixed-point iteration failed to converge."""

    def __init__(self, iterations: int, history: list[tuple]):
        super().__init__(f"fixed point did not converge in {iterations} iterations")
        self.iterations = iterations
        self.history = history


class NonPositiveFunds(CapinflowError):
    """A bank's funds dropped to or below zero (insolvency; run aborted)."""

    def __init__(self, side: str, value: float):
        super().__init__(f"{side} funds became non-positive: {value:.6g}")
        self.side = side
        self.value = value


class PeriodError(CapinflowError):
    """Wraps any per-period failure with the period index attached."""

    def __init__(self, period: int, cause: Exception):
        super().__init__(f"period {period}: {cause}")
        self.period = period
        self.cause = cause


class EmptySeries(CapinflowError):
    """Summary statistics requested for an empty series."""


class LengthMismatch(CapinflowError):
    """Two series with different horizons cannot be differenced."""
