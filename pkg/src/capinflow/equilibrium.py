"""Per-period market clearing: international loan market and FX market.

Given the period's state (funds, repayment burden from last period) and the
realized net-export coefficients, the period solution is a fixed point of
    lam -> e (FX quadratic) -> R* (loan-market gap root) -> lam (policy).
Both clearing residuals at an accepted solution are bounded relative to
total developing-side funding m_U * K_U.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import (
    ERR_BORROWER,
    ERR_FX,
    ERR_LENDER,
    ERR_MAX_ITER,
    ERR_NO_SIGN_CHANGE,
    OK,
    kernels,
    pack_model,
)
from .errors import (
    ComplexRoots,
    MaxIterationsExceeded,
    NoNegativeRoot,
    NoSignChange,
    OutOfUnitInterval,
    RootCountViolation,
)
from .feasibility import rate_bracket
from .params import ModelParams, ShockMoments
from .shocks import ShockDraw

BRACKET_SHRINK = 1e-9
CONVERGENCE_TOL = 1e-9
MAX_ITERATIONS = 500
RESIDUAL_REL_TOL = 1e-8


def repayment_burden(p: ModelParams, R_prev: float, lambda_prev: float, e_prev: float) -> float:
    """Foreign-currency value of last period's international repayment:
    m_U (1+R_prev) lambda_prev K_U / e_prev."""
    return p.m_U * (1.0 + R_prev) * lambda_prev * p.K_U / e_prev


@dataclass(frozen=True)
class PeriodState:
    """State carried between periods; C_prev is last period's repayment
    burden in foreign currency and must be consistent with the other fields
    (see consistent_with)."""

    F: float
    G: float
    e_prev: float
    R_prev: float
    lambda_prev: float
    mu_prev: float
    C_prev: float

    def __post_init__(self):
        if self.e_prev <= 0.0:
            raise ValueError(f"e_prev must be > 0, got {self.e_prev}")
        if self.C_prev < 0.0:
            raise ValueError(f"C_prev must be >= 0, got {self.C_prev}")

    def consistent_with(self, p: ModelParams, tol: float = 1e-12) -> bool:
        expected = repayment_burden(p, self.R_prev, self.lambda_prev, self.e_prev)
        return abs(self.C_prev - expected) <= tol * max(1.0, abs(expected))

    @classmethod
    def make(
        cls,
        p: ModelParams,
        F: float,
        G: float,
        e_prev: float,
        R_prev: float,
        lambda_prev: float,
        mu_prev: float,
    ) -> "PeriodState":
        return cls(
            F=F,
            G=G,
            e_prev=e_prev,
            R_prev=R_prev,
            lambda_prev=lambda_prev,
            mu_prev=mu_prev,
            C_prev=repayment_burden(p, R_prev, lambda_prev, e_prev),
        )


@dataclass(frozen=True)
class EquilibriumResult:
    """One period's market-clearing solution."""

    R_star: float
    e: float
    mu: float
    lam: float
    inflow: float
    residual_L1: float
    residual_L2: float
    iterations: int

    def residuals_ok(self, p: ModelParams, rel_tol: float = RESIDUAL_REL_TOL) -> bool:
        scale = p.m_U * p.K_U
        return (
            abs(self.residual_L1) < rel_tol * scale
            and abs(self.residual_L2) < rel_tol * scale
        )


def net_exports(N0: float, N1: float, e: float) -> float:
    """Net exports at exchange rate e: -N0 + N1 * e (negative at low e:
    imports dominate when foreign goods are cheap)."""
    if N1 <= 0.0:
        raise ValueError(f"N1 must be > 0, got {N1}")
    if e <= 0.0:
        raise ValueError(f"e must be > 0, got {e}")
    return -N0 + N1 * e


def solve_exchange_rate(
    lam: float, N0: float, N1: float, C_prev: float, p: ModelParams
) -> float:
    """Positive root of the FX-market quadratic
    N1 e^2 - (N0 + C_prev) e + m_U lam K_U = 0.

    Both roots are generically positive; the larger one is returned for
    continuity with the no-borrowing limit, where the rate settles at the
    trade-balance-clearing level N0/N1.
    """
    b = N0 + C_prev
    disc = b * b - 4.0 * N1 * (p.m_U * lam * p.K_U)
    if disc < 0.0:
        raise ComplexRoots(
            f"FX quadratic has no real root (N0={N0:.6g}, N1={N1:.6g}, "
            f"C={C_prev:.6g}, lam={lam:.6g})"
        )
    return (b + math.sqrt(disc)) / (2.0 * N1)


def _raise_for_status(st: int, R_hint: float, gap_lo: float = 0.0, gap_hi: float = 0.0):
    if st == ERR_LENDER:
        raise NoNegativeRoot(
            f"lender curvature unavailable near R*={R_hint:.6f} during clearing"
        )
    if st == ERR_BORROWER:
        raise RootCountViolation(
            f"borrower curvature unavailable near R*={R_hint:.6f} during clearing"
        )
    if st == ERR_FX:
        raise ComplexRoots("FX quadratic has no real root during clearing")
    if st == ERR_NO_SIGN_CHANGE:
        raise NoSignChange(
            "loan-market gap does not change sign over the evaluable bracket",
            gap_lo,
            gap_hi,
        )
    raise RuntimeError(f"unexpected kernel status {st}")


def shrunk_bracket(p: ModelParams, s: ShockMoments) -> tuple[float, float]:
    """Admissible-rate bracket shrunk slightly at both ends so both spreads
    stay strictly positive during root finding."""
    lo, hi = rate_bracket(p, s)
    return lo + BRACKET_SHRINK, hi - BRACKET_SHRINK


def solve_interest_rate(
    state: PeriodState, e: float, p: ModelParams, s: ShockMoments
) -> float:
    """Rate clearing the loan market at exchange rate e: root of
    gap(R) = m_D mu*(R) F - m_U lambda*(R) K_U / e
    over the (evaluable part of the) admissible bracket."""
    lo, hi = shrunk_bracket(p, s)
    st, R, gap_lo, gap_hi = kernels.solve_rate(pack_model(p, s), e, state.F, state.G, lo, hi)
    if st != OK:
        _raise_for_status(st, hi, gap_lo, gap_hi)
    return R


def solve_period(
    state: PeriodState,
    draw: ShockDraw,
    p: ModelParams,
    s: ShockMoments,
    init_lambda: float | None = None,
    history: list | None = None,
) -> EquilibriumResult:
    """Solve one period's joint equilibrium by damped fixed-point iteration.

    init_lambda defaults to the previous period's fraction. history, if a
    list, receives one (iteration, lam, e, R_star, L1, L2) row per iteration.
    Raises MaxIterationsExceeded (with the iterate history), NoSignChange,
    OutOfUnitInterval, or coefficient errors.
    """
    lo, hi = shrunk_bracket(p, s)
    lam0 = state.lambda_prev if init_lambda is None else init_lambda
    own_history: list = [] if history is None else history
    st, R, e, mu, lam, iters, L1, L2 = kernels.solve_period(
        pack_model(p, s),
        state.F,
        state.G,
        state.C_prev,
        draw.N0,
        draw.N1,
        lam0,
        lo,
        hi,
        CONVERGENCE_TOL,
        MAX_ITERATIONS,
        own_history,
    )
    if st == ERR_MAX_ITER:
        raise MaxIterationsExceeded(iters, own_history)
    if st != OK:
        _raise_for_status(st, hi, L1, L2)
    if not 0.0 < mu < 1.0:
        raise OutOfUnitInterval("mu_star", mu)
    if not 0.0 < lam < 1.0:
        raise OutOfUnitInterval("lambda_star", lam)
    return EquilibriumResult(
        R_star=R,
        e=e,
        mu=mu,
        lam=lam,
        inflow=p.m_D * mu * state.F,
        residual_L1=L1,
        residual_L2=L2,
        iterations=iters,
    )
