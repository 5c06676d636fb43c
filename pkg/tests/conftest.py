"""Shared fixtures and independent oracles for the test suite."""
from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import settings

import capinflow as ci

settings.register_profile("suite", deadline=None, derandomize=True)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def baseline():
    return ci.BASELINE_PARAMS, ci.BASELINE_MOMENTS


# ---------------------------------------------------------------------------
# independent oracles


def bracket_roots(f, lo: float, hi: float, n_grid: int = 4001) -> list[float]:
    """Dense-grid sign-change scan followed by bisection: an independent
    root-finding path used to cross-check closed-form solvers."""
    xs = np.linspace(lo, hi, n_grid)
    fs = np.array([f(x) for x in xs])
    roots = []
    for i in range(n_grid - 1):
        fa, fb = fs[i], fs[i + 1]
        if fa == 0.0:
            roots.append(float(xs[i]))
            continue
        if fa * fb < 0.0:
            a, b = float(xs[i]), float(xs[i + 1])
            va = fa
            for _ in range(200):
                mid = 0.5 * (a + b)
                vm = f(mid)
                if va * vm <= 0.0:
                    b = mid
                else:
                    a, va = mid, vm
            roots.append(0.5 * (a + b))
    if fs[-1] == 0.0:
        roots.append(float(xs[-1]))
    return roots


def poly_eval(coeffs_desc, x: float) -> float:
    """Evaluate a polynomial given descending coefficients."""
    acc = 0.0
    for c in coeffs_desc:
        acc = acc * x + c
    return acc


def relative_poly_residual(coeffs_desc, x: float) -> float:
    """|p(x)| scaled by the largest term magnitude at x."""
    acc = 0.0
    scale = 0.0
    n = len(coeffs_desc) - 1
    for i, c in enumerate(coeffs_desc):
        term = c * x ** (n - i)
        acc += term
        scale = max(scale, abs(term))
    return abs(acc) / max(scale, 1e-300)


def grid_argmax(f, n: int = 100_001) -> float:
    """Argmax of f over [0, 1] on a uniform grid (vectorized)."""
    xs = np.linspace(0.0, 1.0, n)
    return float(xs[int(np.argmax(f(xs)))])


# ---------------------------------------------------------------------------
# random feasible configurations


def random_feasible_config(rng: np.random.Generator):
    """One random configuration satisfying all solvability conditions,
    together with a rate strictly inside its admissible bracket."""
    while True:
        R_D = rng.uniform(0.03, 0.07)
        T_target = rng.uniform(1.001, 1.012)
        B_D = T_target / (1.0 + R_D) ** 2
        if not 0.0 < B_D < 1.0:
            continue
        eps_mean = rng.uniform(0.90, 0.98)
        eps_var = rng.uniform(0.05, 0.15)
        r_D = R_D * rng.uniform(0.6, 0.95)
        R_U = rng.uniform(0.16, 0.24)
        r_U = rng.uniform(0.12, min(0.2, R_U - 0.01))
        e_ratio_mean = rng.uniform(0.88, 0.96)
        e_ratio_var = rng.uniform(0.15, 0.35)
        eta_mean = rng.uniform(0.80, 0.90)
        eta_var = rng.uniform(0.06, 0.12)
        Q = (1.0 + R_U) ** 2
        win_lo = 1.0 / (3.0 * Q * eta_var + Q * eta_mean**2)
        win_hi = 1.0 / (Q * (eta_var + eta_mean**2))
        if win_lo >= win_hi:
            continue
        width = win_hi - win_lo
        B_U = rng.uniform(win_lo + 0.1 * width, win_hi - 0.1 * width)
        gamma = rng.uniform(2.0, 12.0)
        beta = rng.uniform(0.5, 3.0)
        try:
            p = ci.ModelParams(
                B_D=B_D,
                B_U=B_U,
                gamma=gamma,
                beta=beta,
                R_D=R_D,
                r_D=r_D,
                R_U=R_U,
                r_U=r_U,
                F0=rng.uniform(6.0, 14.0),
                G0=rng.uniform(6.0, 14.0),
            )
            s = dataclasses.replace(
                ci.BASELINE_MOMENTS,
                eps_mean=eps_mean,
                eps_var=eps_var,
                eta_mean=eta_mean,
                eta_var=eta_var,
                e_ratio_mean=e_ratio_mean,
                e_ratio_var=e_ratio_var,
            )
            lo, hi = ci.rate_bracket(p, s)
        except ci.CapinflowError:
            continue
        R = rng.uniform(lo + 0.3 * (hi - lo), hi - 0.05 * (hi - lo))
        try:
            ci.solve_lender(p, s, R)
            ci.solve_borrower(p, s, R)
        except ci.CapinflowError:
            continue
        return p, s, R


@pytest.fixture(scope="session")
def feasible_draws():
    """100 random feasible (params, moments, rate) triples, seeded."""
    rng = np.random.default_rng(20260811)
    return [random_feasible_config(rng) for _ in range(100)]


# ---------------------------------------------------------------------------
# shared heavy computations (reused across test modules)

N_SEEDS = 20


@pytest.fixture(scope="session")
def baseline_batch(baseline):
    """Baseline runs for seeds 0..19."""
    p, s = baseline
    return [ci.run(p, s, seed=seed) for seed in range(N_SEEDS)]


@pytest.fixture(scope="session")
def comparative_batch(baseline):
    """The three preset experiments, each over seeds 0..19."""
    p, s = baseline
    return {
        name: ci.comparative_preset(name, p, s, seeds=N_SEEDS)
        for name in sorted(ci.PRESETS)
    }


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance-criterion lines in the terminal summary."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
