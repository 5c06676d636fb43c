"""Pre-flight feasibility checks: rate bracket and parameter-window report.

validate() never raises; it returns a report listing each named check with
the computed bound values. The simulation driver refuses to start when any
check failed (see capinflow.simulate.run).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BracketEmpty
from .params import ModelParams, ShockMoments


def rate_bracket(p: ModelParams, s: ShockMoments) -> tuple[float, float]:
    """Open interval of international rates profitable for both sides.

    Lower end: the rate at which expected repayment just matches the
    lender's domestic alternative. Upper end: the rate at which borrowing
    abroad, adjusted for expected exchange-rate movement, just matches the
    borrower's domestic funding cost.

    Raises BracketEmpty when the interval is empty.
    """
    lo = (1.0 + p.R_D) / s.eps_mean - 1.0
    hi = (1.0 + p.r_U) / s.e_ratio_mean - 1.0
    if lo >= hi:
        raise BracketEmpty(lo, hi)
    return lo, hi


@dataclass(frozen=True)
class FeasibilityCheck:
    name: str
    passed: bool
    values: dict[str, float]
    note: str = ""


@dataclass(frozen=True)
class FeasibilityReport:
    rate_bracket: tuple[float, float]
    checks: list[FeasibilityCheck] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed_names(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def format(self) -> str:
        lines = [
            f"rate bracket: ({self.rate_bracket[0]:.6f}, {self.rate_bracket[1]:.6f})"
        ]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            vals = ", ".join(f"{k}={v:.6g}" for k, v in c.values.items())
            line = f"[{status}] {c.name}: {vals}"
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        lines.append("overall: " + ("PASS" if self.all_passed else "FAIL"))
        return "\n".join(lines)


def _lender_upper_bound(p: ModelParams, s: ShockMoments, R: float) -> float:
    """Largest lender discount factor keeping the curvature quadratic's
    unique-negative-root condition at rate R (concavity window upper end)."""
    Z = (1.0 + R) * s.eps_mean - (1.0 + p.R_D)
    VV = (1.0 + R) ** 2 * s.eps_var
    return (1.0 + Z * Z / VV) / (1.0 + p.R_D) ** 2


def validate(p: ModelParams, s: ShockMoments) -> FeasibilityReport:
    """Run all feasibility checks; failures are reported, never raised."""
    try:
        lo, hi = rate_bracket(p, s)
        bracket_ok = True
    except BracketEmpty as exc:
        lo, hi = exc.lo, exc.hi
        bracket_ok = False

    checks: list[FeasibilityCheck] = []

    lb = 1.0 / (1.0 + p.R_D) ** 2
    checks.append(
        FeasibilityCheck(
            name="lender_discount_lower",
            passed=lb < p.B_D,
            values={"bound": lb, "B_D": p.B_D},
            note="need bound < B_D",
        )
    )

    if bracket_ok:
        mid = 0.5 * (lo + hi)
        shrink = 1e-9
        ub_lo = _lender_upper_bound(p, s, lo + shrink)
        ub_mid = _lender_upper_bound(p, s, mid)
        ub_hi = _lender_upper_bound(p, s, hi - shrink)
        passed = p.B_D < ub_mid
        values = {
            "bound_at_mid": ub_mid,
            "bound_at_lo": ub_lo,
            "bound_at_hi": ub_hi,
            "B_D": p.B_D,
        }
        note = "concavity window at bracket midpoint; end values informational"
    else:
        passed = False
        values = {"B_D": p.B_D}
        note = "not evaluable: empty rate bracket"
    checks.append(
        FeasibilityCheck(name="lender_discount_upper", passed=passed, values=values, note=note)
    )

    Q = (1.0 + p.R_U) ** 2
    win_lo = 1.0 / (3.0 * Q * s.eta_var + Q * s.eta_mean**2)
    win_hi = 1.0 / (Q * (s.eta_var + s.eta_mean**2))
    checks.append(
        FeasibilityCheck(
            name="borrower_discount_window",
            passed=win_lo < p.B_U < win_hi,
            values={"lower": win_lo, "upper": win_hi, "B_U": p.B_U},
            note="unique negative borrower curvature root",
        )
    )

    lhs = s.N0_lo**2
    rhs = 4.0 * s.N1_hi * p.m_U * p.K_U
    checks.append(
        FeasibilityCheck(
            name="fx_real_root",
            passed=lhs > rhs,
            values={"N0_lo_squared": lhs, "four_N1_hi_mU_KU": rhs},
            note="worst case over uniform supports",
        )
    )

    checks.append(
        FeasibilityCheck(
            name="rate_bracket_nonempty",
            passed=bracket_ok,
            values={"lower": lo, "upper": hi},
        )
    )

    return FeasibilityReport(rate_bracket=(lo, hi), checks=checks)
