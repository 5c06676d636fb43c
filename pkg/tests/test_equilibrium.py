"""Per-period market clearing: FX quadratic, rate root, fixed point."""
import dataclasses
import math

import pytest

import capinflow as ci
from capinflow.equilibrium import PeriodState, repayment_burden, shrunk_bracket
from capinflow.errors import ComplexRoots, NoSignChange
from capinflow.shocks import ShockDraw


def _baseline_state(p):
    lam0 = 0.07610374781264406  # borrower fraction at the initial rate
    return PeriodState.make(
        p, F=10.0, G=10.0, e_prev=75.0, R_prev=0.14, lambda_prev=lam0, mu_prev=0.0
    )


def test_net_exports_examples():
    assert ci.net_exports(1150.0, 16.5, 1150.0 / 16.5) == pytest.approx(0.0, abs=1e-9)
    assert ci.net_exports(1150.0, 16.5, 75.0) == pytest.approx(87.5, abs=1e-12)
    # imports dominate at a very low exchange rate
    assert ci.net_exports(1150.0, 16.5, 1e-9) < 0.0
    with pytest.raises(ValueError):
        ci.net_exports(1150.0, -1.0, 75.0)
    with pytest.raises(ValueError):
        ci.net_exports(1150.0, 16.5, 0.0)


def test_exchange_rate_no_borrowing_limit(baseline):
    p, _ = baseline
    e = ci.solve_exchange_rate(0.0, 1150.0, 16.5, 0.0, p)
    assert e == pytest.approx(1150.0 / 16.5, rel=1e-14)


def test_exchange_rate_two_roots_selects_larger(baseline):
    p, _ = baseline
    # product term m_U lam K_U = 144: quadratic formula gives the two roots
    lam = 144.0 / (p.m_U * p.K_U)
    disc = 1150.0**2 - 4.0 * 16.5 * 144.0
    big = (1150.0 + math.sqrt(disc)) / 33.0
    small = (1150.0 - math.sqrt(disc)) / 33.0
    e = ci.solve_exchange_rate(lam, 1150.0, 16.5, 0.0, p)
    assert e == pytest.approx(big, rel=1e-14)
    assert e > small
    for root in (big, small):
        assert 16.5 * root**2 - 1150.0 * root + 144.0 == pytest.approx(0.0, abs=1e-7)


def test_exchange_rate_tangency_double_root(baseline):
    p, _ = baseline
    # discriminant exactly zero: lam such that 4 N1 m_U lam K_U = (N0+C)^2
    N0, N1 = 1150.0, 16.5
    lam = N0 * N0 / (4.0 * N1 * p.m_U * p.K_U)
    e = ci.solve_exchange_rate(lam, N0, N1, 0.0, p)
    assert e == pytest.approx(N0 / (2.0 * N1), rel=1e-12)


def test_exchange_rate_complex_roots(baseline):
    p, _ = baseline
    with pytest.raises(ComplexRoots):
        ci.solve_exchange_rate(1.0, 10.0, 16.5, 0.0, p)


def test_exchange_rate_residual_small(baseline):
    p, _ = baseline
    for lam in (0.01, 0.07, 0.3, 0.9):
        e = ci.solve_exchange_rate(lam, 1150.0, 16.5, 2.3, p)
        resid = 16.5 * e * e - (1150.0 + 2.3) * e + p.m_U * lam * p.K_U
        scale = max(16.5 * e * e, (1150.0 + 2.3) * e)
        assert abs(resid) / scale < 1e-9


def test_period_state_consistency(baseline):
    p, _ = baseline
    st = _baseline_state(p)
    assert st.consistent_with(p)
    assert st.C_prev == pytest.approx(
        p.m_U * 1.14 * st.lambda_prev * p.K_U / 75.0, rel=1e-14
    )
    bad = dataclasses.replace(st, C_prev=st.C_prev * 1.01)
    assert not bad.consistent_with(p)


def test_gap_signs_at_bracket_ends(baseline):
    """Supply is shut off at the (evaluable) bottom of the bracket, demand
    at the top, so the gap brackets a root."""
    from capinflow._backend import kernels, pack_model

    p, s = baseline
    mv = pack_model(p, s)
    lo, hi = shrunk_bracket(p, s)
    st, v_lo = kernels.valid_lower(mv, lo, hi)
    assert st == 0
    st, gap_lo, _, lam_lo = kernels.loan_gap(mv, v_lo, 10.0, 10.0, 75.0)
    assert st == 0
    assert gap_lo < 0.0
    st, gap_hi, mu_hi, lam_hi = kernels.loan_gap(mv, hi, 10.0, 10.0, 75.0)
    assert st == 0
    assert gap_hi > 0.0
    # at the top the borrowing spread vanishes: demand ~ 0, supply positive
    assert abs(lam_hi) < 1e-6
    assert mu_hi > 0.0


def test_solve_interest_rate_against_bisection_oracle(baseline):
    """The production root finder agrees with plain bisection driven to a
    sub-1e-12 bracket width."""
    from capinflow._backend import kernels, pack_model

    p, s = baseline
    state = _baseline_state(p)
    R = ci.solve_interest_rate(state, 75.0, p, s)
    lo, hi = shrunk_bracket(p, s)
    mv = pack_model(p, s)
    _, a = kernels.valid_lower(mv, lo, hi)
    b = hi

    def gap(x):
        st, g, _, _ = kernels.loan_gap(mv, x, state.F, state.G, 75.0)
        assert st == 0
        return g

    ga = gap(a)
    while b - a > 1e-13:
        mid = 0.5 * (a + b)
        gm = gap(mid)
        if ga * gm <= 0.0:
            b = mid
        else:
            a, ga = mid, gm
    assert abs(R - 0.5 * (a + b)) < 1e-9
    assert lo < R < hi
    assert abs(gap(R)) / (p.m_U * p.K_U) < 1e-12


def test_solve_interest_rate_no_sign_change(baseline):
    """A borrower with no demand anywhere (tiny funds multiplier) cannot
    produce a sign change; the error carries the end gaps."""
    p, s = baseline
    # huge lender funds push supply positive across the whole bracket
    state = PeriodState.make(
        p, F=10.0, G=10.0, e_prev=75.0, R_prev=0.14, lambda_prev=0.0, mu_prev=0.0
    )
    p2 = dataclasses.replace(p, m_U=1)  # demand scaled down 100x
    with pytest.raises(NoSignChange) as err:
        ci.solve_interest_rate(dataclasses.replace(state, F=200.0), 75.0, p2, s)
    assert err.value.gap_lo is not None


def test_solve_period_baseline_first_period(baseline):
    """First-period equilibrium at the central net-export draw: converges
    inside the bracket with interior fractions and tiny residuals."""
    p, s = baseline
    state = _baseline_state(p)
    draw = ShockDraw(eps=s.eps_mean, eta=s.eta_mean, N0=1150.0, N1=16.5)
    res = ci.solve_period(state, draw, p, s)
    lo, hi = ci.rate_bracket(p, s)
    assert lo < res.R_star < hi
    assert res.e > 0.0
    assert 0.0 < res.mu < 1.0
    assert 0.0 < res.lam < 1.0
    assert res.iterations <= 50
    assert res.residuals_ok(p)
    assert res.inflow == pytest.approx(p.m_D * res.mu * state.F, rel=1e-14)
    assert res.inflow == pytest.approx(p.m_U * res.lam * p.K_U / res.e, rel=1e-7)
    # regression pin (values produced by this solver, cross-checked above)
    assert res.R_star == pytest.approx(0.14440735599811994, abs=1e-9)
    assert res.e == pytest.approx(69.70939735322156, abs=1e-6)


def test_solve_period_is_fixed_point(baseline):
    """Re-solving from the converged point moves nothing beyond 1e-10."""
    p, s = baseline
    state = _baseline_state(p)
    draw = ShockDraw(eps=s.eps_mean, eta=s.eta_mean, N0=1150.0, N1=16.5)
    first = ci.solve_period(state, draw, p, s)
    again = ci.solve_period(state, draw, p, s, init_lambda=first.lam)
    assert abs(again.R_star - first.R_star) < 1e-10
    assert abs(again.e - first.e) / first.e < 1e-10
    assert abs(again.lam - first.lam) < 1e-10


def test_solve_period_multi_start_agreement(baseline):
    p, s = baseline
    state = _baseline_state(p)
    draw = ShockDraw(eps=s.eps_mean, eta=s.eta_mean, N0=1150.0, N1=16.5)
    results = [
        ci.solve_period(state, draw, p, s, init_lambda=lam0)
        for lam0 in (0.01, 0.1, 0.5, 0.9)
    ]
    for res in results[1:]:
        assert abs(res.R_star - results[0].R_star) < 1e-8
        assert abs(res.e - results[0].e) / results[0].e < 1e-8
        assert abs(res.lam - results[0].lam) < 1e-8


def test_solve_period_history_trace(baseline):
    p, s = baseline
    state = _baseline_state(p)
    draw = ShockDraw(eps=s.eps_mean, eta=s.eta_mean, N0=1150.0, N1=16.5)
    history: list = []
    ci.solve_period(state, draw, p, s, history=history)
    assert len(history) >= 2
    it, lam, e, R, L1, L2 = history[0]
    assert it == 1
    assert 0.0 <= lam <= 1.0 and e > 0.0
    # iterations are numbered consecutively
    assert [row[0] for row in history] == list(range(1, len(history) + 1))
