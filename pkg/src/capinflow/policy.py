"""Closed-form optimal portfolio fractions for both banks.

mu_star: fraction of a developed-country bank's funds lent internationally.
lambda_star: fraction of a developing-country bank's funding raised
internationally. Both follow from the first-order conditions of the
one-period objective with quadratic continuation value; both must land in
(0, 1) for an admissible interior solution, and the checked evaluators
raise OutOfUnitInterval otherwise (callers may evaluate raw values during
root bracketing, where trial rates routinely produce corner values).
"""
from __future__ import annotations

from dataclasses import dataclass

from ._backend import kernels, pack_model
from .coeffs import (
    BorrowerCoeffs,
    LenderCoeffs,
    borrowing_spread,
    lending_spread,
    solve_borrower,
    solve_lender,
)
from .errors import OutOfUnitInterval
from .params import ModelParams, ShockMoments


@dataclass(frozen=True)
class PolicyInputs:
    """State and solved coefficients needed to evaluate both policies."""

    F: float
    G: float
    R_star: float
    lender: LenderCoeffs
    borrower: BorrowerCoeffs

    @classmethod
    def at(
        cls, p: ModelParams, s: ShockMoments, R_star: float, F: float, G: float
    ) -> "PolicyInputs":
        return cls(
            F=F,
            G=G,
            R_star=R_star,
            lender=solve_lender(p, s, R_star),
            borrower=solve_borrower(p, s, R_star),
        )


def mu_star_raw(
    p: ModelParams, s: ShockMoments, R_star: float, F: float, coeffs: LenderCoeffs
) -> float:
    """Lender policy value without the unit-interval check."""
    return kernels.mu_star_raw(
        pack_model(p, s), R_star, F, coeffs.c, coeffs.b, coeffs.mu_denom
    )


def lambda_star_raw(
    p: ModelParams, s: ShockMoments, R_star: float, G: float, coeffs: BorrowerCoeffs
) -> float:
    """Borrower policy value without the unit-interval check."""
    return kernels.lambda_star_raw(
        pack_model(p, s), R_star, G, coeffs.z, coeffs.y, coeffs.lam_denom
    )


def mu_star(p: ModelParams, s: ShockMoments, inputs: PolicyInputs) -> float:
    """Checked lender policy: raises OutOfUnitInterval outside (0, 1)."""
    value = mu_star_raw(p, s, inputs.R_star, inputs.F, inputs.lender)
    if not 0.0 < value < 1.0:
        raise OutOfUnitInterval("mu_star", value)
    return value


def lambda_star(p: ModelParams, s: ShockMoments, inputs: PolicyInputs) -> float:
    """Checked borrower policy: raises OutOfUnitInterval outside (0, 1)."""
    value = lambda_star_raw(p, s, inputs.R_star, inputs.G, inputs.borrower)
    if not 0.0 < value < 1.0:
        raise OutOfUnitInterval("lambda_star", value)
    return value


def lender_objective_derivative(
    p: ModelParams,
    s: ShockMoments,
    R_star: float,
    F: float,
    mu: float,
    coeffs: LenderCoeffs,
) -> float:
    """Derivative of the lender's one-period objective with respect to mu,
    in the fully expanded form (used to cross-check the closed-form policy
    against algebra-transcription errors)."""
    B, g = p.B_D, p.gamma
    RD = p.R_D
    em, ev = s.eps_mean, s.eps_var
    VV = (1.0 + R_star) ** 2 * ev
    dE = -F * (1.0 + RD) + F * (1.0 + R_star) * em
    expected_next = F * ((1.0 - mu) * (1.0 + RD) + mu * (1.0 + R_star) * em) - p.r_tk_D
    return (
        dE
        - g * F * F * mu * VV
        + B * coeffs.b * dE
        + B * coeffs.c * (2.0 * mu * F * F * VV)
        + 2.0 * B * coeffs.c * expected_next * dE
    )


def borrower_objective_derivative(
    p: ModelParams,
    s: ShockMoments,
    R_star: float,
    G: float,
    lam: float,
    coeffs: BorrowerCoeffs,
) -> float:
    """Derivative of the borrower's one-period objective with respect to
    lambda, in the fully expanded form."""
    B, bt = p.B_U, p.beta
    KU = p.K_U
    A = borrowing_spread(p, s, R_star)
    W = (1.0 + R_star) ** 2 * s.e_ratio_var
    m = (1.0 + p.R_U) * s.eta_mean
    expected_next = (
        m * G
        - KU * ((1.0 - lam) * (1.0 + p.r_U) + lam * (1.0 + R_star) * s.e_ratio_mean)
        + KU
    )
    return (
        KU * A
        - bt * lam * KU * KU * W
        + B * coeffs.y * KU * A
        + B * coeffs.z * (2.0 * KU * KU * lam * W)
        + 2.0 * B * coeffs.z * expected_next * KU * A
    )


def lender_objective(
    p: ModelParams,
    s: ShockMoments,
    R_star: float,
    F: float,
    mu,
    coeffs: LenderCoeffs,
):
    """Lender one-period objective (up to mu-independent constants);
    accepts scalar or numpy array mu for grid searches."""
    B, g = p.B_D, p.gamma
    em = s.eps_mean
    VV = (1.0 + R_star) ** 2 * s.eps_var
    gross = F * ((1.0 - mu) * (1.0 + p.R_D) + mu * (1.0 + R_star) * em)
    flow = gross - (1.0 + p.r_D) * p.K_D - 0.5 * g * F * F * mu * mu * VV
    expected_next = gross - p.r_tk_D
    variance_next = mu * mu * F * F * VV
    return flow + B * (
        coeffs.b * expected_next
        + coeffs.c * (expected_next * expected_next + variance_next)
    )


def borrower_objective(
    p: ModelParams,
    s: ShockMoments,
    R_star: float,
    G: float,
    lam,
    coeffs: BorrowerCoeffs,
):
    """Borrower one-period objective (up to lambda-independent constants);
    accepts scalar or numpy array lam for grid searches."""
    B, bt = p.B_U, p.beta
    KU = p.K_U
    W = (1.0 + R_star) ** 2 * s.e_ratio_var
    Q = (1.0 + p.R_U) ** 2
    m = (1.0 + p.R_U) * s.eta_mean
    funding_cost = KU * ((1.0 - lam) * (1.0 + p.r_U) + lam * (1.0 + R_star) * s.e_ratio_mean)
    flow = m * G - funding_cost - 0.5 * bt * (Q * s.eta_var * G * G + lam * lam * KU * KU * W)
    expected_next = m * G - funding_cost + KU
    variance_next = lam * lam * KU * KU * W + Q * s.eta_var * G * G
    return flow + B * (
        coeffs.y * expected_next
        + coeffs.z * (expected_next * expected_next + variance_next)
    )
