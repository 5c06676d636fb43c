"""Multi-period simulation: per-period equilibrium under seeded shocks.

Funds handling (``funds``):

* ``"fixed"`` (default): each bank re-lends a constant fund base every
  period (F and G stay at their initial values). Dynamics come from the
  repayment burden carried across periods and the redrawn net-export
  coefficients. This is the stationary environment the summary statistics
  and comparative experiments are defined on.
* ``"accumulate"``: funds follow the balance-sheet recursions (profits are
  retained period over period). Note the developing-side book runs a
  structural loss at the default parameterization, so its funds hit zero
  within a few periods and the run aborts with NonPositiveFunds unless
  allow_negative_borrower_funds=True.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

import numpy as np

from .coeffs import solve_borrower, solve_lender
from .equilibrium import PeriodState, repayment_burden, solve_period
from .errors import FeasibilityError, NonPositiveFunds, PeriodError
from .feasibility import validate
from .params import ModelParams, ShockMoments
from .policy import lambda_star_raw, mu_star_raw
from .shocks import ShockDraw, ShockStreams, dump_draws_csv

FUNDS_MODES = ("fixed", "accumulate")

CSV_COLUMNS = (
    "t",
    "R_star",
    "e",
    "mu",
    "lambda",
    "inflow",
    "F",
    "G",
    "N0",
    "N1",
    "eps",
    "eta",
    "iterations",
)


def evolve_lender_funds(
    F_prev: float, mu_prev: float, R_star_prev: float, eps_realized: float, p: ModelParams
) -> float:
    """Next-period lender funds: gross returns on the split portfolio minus
    net deposit cost. Raises NonPositiveFunds at or below zero."""
    F = (
        F_prev
        * ((1.0 - mu_prev) * (1.0 + p.R_D) + mu_prev * (1.0 + R_star_prev) * eps_realized)
        - (1.0 + p.r_D) * p.K_D
        + p.K_D
    )
    if F <= 0.0:
        raise NonPositiveFunds("lender", F)
    return F


def evolve_borrower_funds(
    G_prev: float,
    lambda_prev: float,
    R_star_prev: float,
    eta_realized: float,
    e_ratio: float,
    p: ModelParams,
    allow_nonpositive: bool = False,
) -> float:
    """Next-period borrower funds: gross domestic lending return minus
    repayment of the split funding plus the fresh deposit. e_ratio is the
    static expected exchange-rate ratio used to value international
    repayment. Raises NonPositiveFunds at or below zero unless
    allow_nonpositive (negative funds are meaningful as accumulated debt)."""
    G = (
        eta_realized * (1.0 + p.R_U) * G_prev
        - p.K_U
        * ((1.0 - lambda_prev) * (1.0 + p.r_U) + lambda_prev * (1.0 + R_star_prev) * e_ratio)
        + p.K_U
    )
    if G <= 0.0 and not allow_nonpositive:
        raise NonPositiveFunds("borrower", G)
    return G


@dataclass
class SimulationSeries:
    """Column-oriented per-period results plus run metadata."""

    params: ModelParams
    moments: ShockMoments
    seed: int
    mode: str
    funds: str
    t: np.ndarray
    R_star: np.ndarray
    e: np.ndarray
    mu: np.ndarray
    lam: np.ndarray
    inflow: np.ndarray
    F: np.ndarray
    G: np.ndarray
    N0: np.ndarray
    N1: np.ndarray
    eps: np.ndarray
    eta: np.ndarray
    iterations: np.ndarray
    resid_L1: np.ndarray
    resid_L2: np.ndarray
    C_prev: np.ndarray
    stream_fingerprint: str
    draws: list[ShockDraw] = field(default_factory=list)
    trace: list[tuple] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.t)

    def write_csv(self, out: IO[str]) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for i in range(len(self)):
            writer.writerow(
                [
                    int(self.t[i]),
                    repr(float(self.R_star[i])),
                    repr(float(self.e[i])),
                    repr(float(self.mu[i])),
                    repr(float(self.lam[i])),
                    repr(float(self.inflow[i])),
                    repr(float(self.F[i])),
                    repr(float(self.G[i])),
                    repr(float(self.N0[i])),
                    repr(float(self.N1[i])),
                    repr(float(self.eps[i])),
                    repr(float(self.eta[i])),
                    int(self.iterations[i]),
                ]
            )

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            self.write_csv(fh)

    def write_trace_csv(self, out: IO[str]) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["period", "iteration", "lambda", "e", "R_star", "L1", "L2"])
        for row in self.trace:
            period, it, lam, e, R, L1, L2 = row
            writer.writerow([period, it, repr(lam), repr(e), repr(R), repr(L1), repr(L2)])

    def dump_draws(self, out: IO[str]) -> None:
        dump_draws_csv(self.draws, out)


PLOT_SCRIPT = """\
# Trajectory plots; render with: gnuplot <this file>
set datafile separator ","
set key noautotitle
set grid
set terminal pngcairo size 900,540

set output "inflow.png"
set title "Capital inflow"
set xlabel "period"
plot "{csv}" using 1:6 skip 1 with linespoints lw 2

set output "exchange_rate.png"
set title "Exchange rate"
set xlabel "period"
plot "{csv}" using 1:3 skip 1 with linespoints lw 2

set output "interest_rate.png"
set title "International interest rate"
set xlabel "period"
plot "{csv}" using 1:2 skip 1 with linespoints lw 2
"""


def write_plot_script(path: str | Path, csv_name: str = "series.csv") -> None:
    """Companion plotting commands for the three trajectory figures."""
    Path(path).write_text(PLOT_SCRIPT.format(csv=csv_name))


def bootstrap_policies(p: ModelParams, s: ShockMoments) -> tuple[float, float]:
    """Initial-period policy fractions evaluated at (R0_star, F0, G0).

    Raw formula values: the initial rate is a given, not a solved
    equilibrium, so the unit-interval check is not applied here.
    """
    lender = solve_lender(p, s, p.R0_star)
    borrower = solve_borrower(p, s, p.R0_star)
    mu0 = mu_star_raw(p, s, p.R0_star, p.F0, lender)
    lam0 = lambda_star_raw(p, s, p.R0_star, p.G0, borrower)
    return mu0, lam0


def run(
    p: ModelParams,
    s: ShockMoments,
    seed: int,
    mode: str = "deterministic-mean",
    funds: str = "fixed",
    allow_negative_borrower_funds: bool = False,
    init_lambda: float | None = None,
    collect_trace: bool = False,
    strict: bool = True,
) -> SimulationSeries:
    """Simulate ``p.horizon`` periods and return the trajectory series.

    The run is fully determined by (params, moments, seed, mode, funds).
    strict=True refuses to start when any feasibility check fails.
    """
    if funds not in FUNDS_MODES:
        raise ValueError(f"funds must be one of {FUNDS_MODES}, got {funds!r}")
    report = validate(p, s)
    if strict and not report.all_passed:
        raise FeasibilityError(report.failed_names)

    streams = ShockStreams(seed, s, mode=mode)
    horizon = p.horizon

    mu_prev, lam_prev = bootstrap_policies(p, s)
    state = PeriodState.make(
        p, p.F0, p.G0, p.e0, p.R0_star, lambda_prev=lam_prev, mu_prev=mu_prev
    )

    cols = {
        name: np.empty(horizon)
        for name in (
            "R_star", "e", "mu", "lam", "inflow", "F", "G",
            "N0", "N1", "eps", "eta", "resid_L1", "resid_L2", "C_prev",
        )
    }
    iters = np.empty(horizon, dtype=np.int64)
    trace: list[tuple] = []

    for t in range(1, horizon + 1):
        draw = streams.draw()
        try:
            if funds == "accumulate":
                F_t = evolve_lender_funds(state.F, state.mu_prev, state.R_prev, draw.eps, p)
                G_t = evolve_borrower_funds(
                    state.G,
                    state.lambda_prev,
                    state.R_prev,
                    draw.eta,
                    s.e_ratio_mean,
                    p,
                    allow_nonpositive=allow_negative_borrower_funds,
                )
            else:
                F_t, G_t = p.F0, p.G0
            state = PeriodState(
                F=F_t,
                G=G_t,
                e_prev=state.e_prev,
                R_prev=state.R_prev,
                lambda_prev=state.lambda_prev,
                mu_prev=state.mu_prev,
                C_prev=state.C_prev,
            )
            history: list | None = [] if collect_trace else None
            result = solve_period(
                state, draw, p, s, init_lambda=init_lambda, history=history
            )
        except Exception as exc:
            raise PeriodError(t, exc) from exc
        if collect_trace:
            trace.extend((t, *row) for row in history)
        i = t - 1
        cols["R_star"][i] = result.R_star
        cols["e"][i] = result.e
        cols["mu"][i] = result.mu
        cols["lam"][i] = result.lam
        cols["inflow"][i] = result.inflow
        cols["F"][i] = F_t
        cols["G"][i] = G_t
        cols["N0"][i] = draw.N0
        cols["N1"][i] = draw.N1
        cols["eps"][i] = draw.eps
        cols["eta"][i] = draw.eta
        cols["resid_L1"][i] = result.residual_L1
        cols["resid_L2"][i] = result.residual_L2
        cols["C_prev"][i] = state.C_prev
        iters[i] = result.iterations
        state = PeriodState.make(
            p,
            F_t,
            G_t,
            e_prev=result.e,
            R_prev=result.R_star,
            lambda_prev=result.lam,
            mu_prev=result.mu,
        )

    return SimulationSeries(
        params=p,
        moments=s,
        seed=seed,
        mode=mode,
        funds=funds,
        t=np.arange(1, horizon + 1, dtype=np.int64),
        R_star=cols["R_star"],
        e=cols["e"],
        mu=cols["mu"],
        lam=cols["lam"],
        inflow=cols["inflow"],
        F=cols["F"],
        G=cols["G"],
        N0=cols["N0"],
        N1=cols["N1"],
        eps=cols["eps"],
        eta=cols["eta"],
        iterations=iters,
        resid_L1=cols["resid_L1"],
        resid_L2=cols["resid_L2"],
        C_prev=cols["C_prev"],
        stream_fingerprint=streams.fingerprint,
        draws=streams.log,
        trace=trace,
    )
