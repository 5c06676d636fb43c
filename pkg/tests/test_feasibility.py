"""Rate bracket and the pre-flight feasibility report."""
import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

import capinflow as ci
from capinflow.errors import BracketEmpty


def test_rate_bracket_baseline(baseline):
    p, s = baseline
    lo, hi = ci.rate_bracket(p, s)
    # direct evaluation of the two bounds
    assert lo == pytest.approx(1.05 / 0.94 - 1.0, abs=1e-12)
    assert hi == pytest.approx(1.15 / 0.92 - 1.0, abs=1e-12)
    assert round(lo, 6) == 0.117021
    assert round(hi, 6) == 0.25


def test_rate_bracket_no_risk_degenerate(baseline):
    p, s = baseline
    s2 = dataclasses.replace(s, eps_mean=1.0, e_ratio_mean=1.0)
    lo, hi = ci.rate_bracket(p, s2)
    assert lo == pytest.approx(p.R_D, abs=1e-15)
    assert hi == pytest.approx(p.r_U, abs=1e-15)


def test_rate_bracket_empty(baseline):
    p, s = baseline
    p2 = dataclasses.replace(p, R_D=0.2)
    s2 = dataclasses.replace(s, eps_mean=0.9, e_ratio_mean=1.1)
    # lower bound 1.2/0.9-1 = 0.333 exceeds upper 1.15/1.1-1 = 0.045
    with pytest.raises(BracketEmpty):
        ci.rate_bracket(p2, s2)


@given(
    eps1=st.floats(0.85, 0.99),
    eps2=st.floats(0.85, 0.99),
    er1=st.floats(0.85, 1.05),
    er2=st.floats(0.85, 1.05),
)
def test_bracket_ends_antitone(eps1, eps2, er1, er2):
    """Lower end falls as expected repayment rises; upper end falls as
    expected depreciation rises."""
    p = ci.BASELINE_PARAMS
    base = ci.BASELINE_MOMENTS

    def ends(eps_mean, er_mean):
        s = dataclasses.replace(base, eps_mean=eps_mean, e_ratio_mean=er_mean)
        lo = (1.0 + p.R_D) / s.eps_mean - 1.0
        hi = (1.0 + p.r_U) / s.e_ratio_mean - 1.0
        return lo, hi

    lo1, hi1 = ends(eps1, er1)
    lo2, hi2 = ends(eps2, er2)
    if eps1 < eps2:
        assert lo1 > lo2
    elif eps1 > eps2:
        assert lo1 < lo2
    if er1 < er2:
        assert hi1 > hi2
    elif er1 > er2:
        assert hi1 < hi2


def test_validate_baseline_all_pass(baseline):
    p, s = baseline
    report = ci.validate(p, s)
    assert report.all_passed
    assert [c.name for c in report.checks] == [
        "lender_discount_lower",
        "lender_discount_upper",
        "borrower_discount_window",
        "fx_real_root",
        "rate_bracket_nonempty",
    ]


def test_validate_baseline_values(baseline):
    p, s = baseline
    checks = {c.name: c for c in ci.validate(p, s).checks}

    lower = checks["lender_discount_lower"]
    assert lower.values["bound"] == pytest.approx(1.0 / 1.05**2, abs=1e-12)
    assert round(lower.values["bound"], 5) == 0.90703
    assert lower.values["bound"] < 0.91

    window = checks["borrower_discount_window"]
    # direct evaluation: 1/(3*1.44*0.09 + 1.44*0.85^2) and 1/(1.44*(0.09+0.85^2))
    assert window.values["lower"] == pytest.approx(1.0 / 1.4292, abs=1e-12)
    assert window.values["upper"] == pytest.approx(1.0 / 1.17, abs=1e-12)
    assert round(window.values["lower"], 5) == 0.69969
    assert round(window.values["upper"], 5) == 0.8547
    assert window.values["lower"] < 0.8 < window.values["upper"]

    fx = checks["fx_real_root"]
    assert fx.values["N0_lo_squared"] == pytest.approx(1_210_000.0)
    assert fx.values["four_N1_hi_mU_KU"] == pytest.approx(144_000.0)


def test_validate_reports_failure_not_raise(baseline):
    p, s = baseline
    p2 = dataclasses.replace(p, B_D=0.89)  # below the discount lower bound
    report = ci.validate(p2, s)
    assert not report.all_passed
    assert "lender_discount_lower" in report.failed_names
    assert "FAIL" in report.format()


def test_validate_empty_bracket_reported(baseline):
    p, s = baseline
    s2 = dataclasses.replace(s, e_ratio_mean=1.2)
    report = ci.validate(p, s2)
    assert "rate_bracket_nonempty" in report.failed_names


def test_validate_pure(baseline):
    p, s = baseline
    assert ci.validate(p, s) == ci.validate(p, s)
