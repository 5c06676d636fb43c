"""Value-function coefficients for both banks.

Each bank's value function is quadratic in its funds; only the slope and
curvature enter the portfolio policies (the constants cancel from the
first-order conditions and are never computed). The lender curvature solves
a quadratic, the borrower curvature a cubic; root selection enforces the
concavity requirement (curvature < 0) as a runtime check.
"""
from __future__ import annotations

from dataclasses import dataclass

from ._backend import ERR_LENDER, OK, kernels, pack_model
from .errors import NoNegativeRoot, RootCountViolation
from .params import ModelParams, ShockMoments


@dataclass(frozen=True)
class LenderCoeffs:
    """Lender curvature c (< 0), slope b, auxiliary multiplier L, and the
    policy denominator mu_denom = (gamma - 2 B_D c) VV - 2 B_D c Z^2 where
    VV = (1+R*)^2 Var(eps) and Z is the lending spread."""

    c: float
    b: float
    L: float
    mu_denom: float


@dataclass(frozen=True)
class BorrowerCoeffs:
    """Borrower curvature z (< 0), slope y, auxiliary multiplier J, and the
    policy denominator lam_denom = W (beta - 2 B_U z) - 2 B_U z A^2 where
    W = (1+R*)^2 Var(e-ratio) and A is the borrowing spread."""

    z: float
    y: float
    J: float
    lam_denom: float


def lending_spread(p: ModelParams, s: ShockMoments, R_star: float) -> float:
    """Expected excess gross return on international vs domestic lending."""
    return (1.0 + R_star) * s.eps_mean - (1.0 + p.R_D)


def borrowing_spread(p: ModelParams, s: ShockMoments, R_star: float) -> float:
    """Domestic funding cost minus expected international repayment cost."""
    return (1.0 + p.r_U) - (1.0 + R_star) * s.e_ratio_mean


def lender_quadratic(p: ModelParams, s: ShockMoments, R_star: float) -> tuple[float, float, float]:
    """Coefficients (a2, a1, a0) of the lender curvature quadratic
    a2 c^2 + a1 c + a0 = 0."""
    B = p.B_D
    g = p.gamma
    Z = lending_spread(p, s, R_star)
    VV = (1.0 + R_star) ** 2 * s.eps_var
    T = B * (1.0 + p.R_D) ** 2
    a2 = 4.0 * B * B * (Z * Z + VV) * (Z * Z + VV * (1.0 - T))
    a1 = -2.0 * B * g * VV * ((2.0 - T) * Z * Z + 2.0 * VV * (1.0 - T))
    a0 = g * g * VV * VV * (1.0 - T)
    return a2, a1, a0


def borrower_cubic(p: ModelParams, s: ShockMoments, R_star: float) -> tuple[float, float, float, float]:
    """Coefficients (a3, a2, a1, a0) of the borrower curvature cubic
    a3 z^3 + a2 z^2 + a1 z + a0 = 0."""
    B = p.B_U
    bt = p.beta
    A = borrowing_spread(p, s, R_star)
    W = (1.0 + R_star) ** 2 * s.e_ratio_var
    Q = (1.0 + p.R_U) ** 2
    M2 = ((1.0 + p.R_U) * s.eta_mean) ** 2
    etv = s.eta_var
    d0 = W * bt
    d1 = -2.0 * B * (A * A + W)
    a0 = 0.5 * bt * Q * etv * d0 * d0
    a1 = d0 * d0 * (1.0 - B * Q * etv - B * M2) + Q * etv * bt * d0 * d1
    a2 = (
        2.0 * d0 * d1
        - Q * etv * (2.0 * B * d0 * d1 - 0.5 * bt * d1 * d1)
        + 2.0 * bt * B * B * W * A * A * M2
        - B * M2 * (2.0 * d0 * d1 + 4.0 * B * A * A * d0)
    )
    a3 = (
        d1 * d1 * (1.0 - B * Q * etv - B * M2)
        - 4.0 * B * B * B * W * A * A * M2
        - B * M2 * (4.0 * B * B * A * A * A * A + 4.0 * B * A * A * d1)
    )
    return a3, a2, a1, a0


def lender_slope_parts(
    p: ModelParams, s: ShockMoments, R_star: float, c: float
) -> tuple[float, float, float]:
    """(b, L, mu_denom) computed from a given curvature c (test hook; the
    production path solves c first and derives these in the kernel)."""
    B = p.B_D
    Z = lending_spread(p, s, R_star)
    VV = (1.0 + R_star) ** 2 * s.eps_var
    mu_denom = (p.gamma - 2.0 * B * c) * VV - 2.0 * B * c * Z * Z
    L = (1.0 + p.R_D) * (1.0 - (-2.0 * B * c * Z * Z) / mu_denom)
    b = (1.0 - 2.0 * B * c * p.r_tk_D) * L / (1.0 - B * L)
    return b, L, mu_denom


def borrower_slope_parts(
    p: ModelParams, s: ShockMoments, R_star: float, z: float
) -> tuple[float, float, float]:
    """(y, J, lam_denom) computed from a given curvature z (test hook)."""
    B = p.B_U
    A = borrowing_spread(p, s, R_star)
    W = (1.0 + R_star) ** 2 * s.e_ratio_var
    lam_denom = W * (p.beta - 2.0 * B * z) - 2.0 * B * z * A * A
    J = (1.0 + p.R_U) * s.eta_mean * (1.0 - (-2.0 * B * z * A * A) / lam_denom)
    y = J * (1.0 - 2.0 * B * z * p.r_tk_U) / (1.0 - B * J)
    return y, J, lam_denom


def solve_c(p: ModelParams, s: ShockMoments, R_star: float) -> float:
    """Unique negative root of the lender curvature quadratic.

    Raises NoNegativeRoot when the discount condition fails (B_D (1+R_D)^2
    must exceed 1), when the quadratic has complex roots, or when the
    negative-root count is not exactly one.
    """
    st, c, _b, _L, _md = kernels.lender_coeffs(pack_model(p, s), R_star)
    if st != OK:
        T = p.B_D * (1.0 + p.R_D) ** 2
        raise NoNegativeRoot(
            f"no unique negative lender curvature at R*={R_star:.6f} "
            f"(discount product {T:.6f}, spread {lending_spread(p, s, R_star):.6f})"
        )
    return c


def solve_lender(p: ModelParams, s: ShockMoments, R_star: float) -> LenderCoeffs:
    """Full lender coefficient set; propagates NoNegativeRoot."""
    st, c, b, L, mu_denom = kernels.lender_coeffs(pack_model(p, s), R_star)
    if st != OK:
        solve_c(p, s, R_star)  # raises with diagnostics
        raise NoNegativeRoot("lender slope identity failed (1 - B_D L <= 0)")
    return LenderCoeffs(c=c, b=b, L=L, mu_denom=mu_denom)


def solve_z(p: ModelParams, s: ShockMoments, R_star: float) -> float:
    """Unique negative real root of the borrower curvature cubic.

    Raises RootCountViolation when the count of negative real roots differs
    from one (discount-window failure).
    """
    st, z, _y, _J, _ld, n_neg = kernels.borrower_coeffs(pack_model(p, s), R_star)
    if st != OK:
        raise RootCountViolation(
            f"{n_neg} negative real roots of the borrower curvature cubic at "
            f"R*={R_star:.6f} (need exactly 1)",
            n_negative=n_neg,
        )
    return z


def solve_borrower(p: ModelParams, s: ShockMoments, R_star: float) -> BorrowerCoeffs:
    """Full borrower coefficient set; propagates RootCountViolation."""
    st, z, y, J, lam_denom, n_neg = kernels.borrower_coeffs(pack_model(p, s), R_star)
    if st != OK:
        raise RootCountViolation(
            f"borrower coefficients unavailable at R*={R_star:.6f} "
            f"({n_neg} negative roots or slope identity failed)",
            n_negative=n_neg,
        )
    return BorrowerCoeffs(z=z, y=y, J=J, lam_denom=lam_denom)


def describe_assembly(p: ModelParams, s: ShockMoments, R_star: float) -> str:
    """Human-readable dump of the full coefficient assembly (debug CLI)."""
    lines = [f"R* = {R_star!r}"]
    Z = lending_spread(p, s, R_star)
    A = borrowing_spread(p, s, R_star)
    VV = (1.0 + R_star) ** 2 * s.eps_var
    W = (1.0 + R_star) ** 2 * s.e_ratio_var
    lines.append(f"lending spread Z = {Z!r}, scaled eps variance VV = {VV!r}")
    lines.append(f"borrowing spread A = {A!r}, scaled e-ratio variance W = {W!r}")
    a2, a1, a0 = lender_quadratic(p, s, R_star)
    lines.append(f"lender quadratic: {a2!r} c^2 + {a1!r} c + {a0!r} = 0")
    try:
        lc = solve_lender(p, s, R_star)
        lines.append(
            f"  c = {lc.c!r}, b = {lc.b!r}, L = {lc.L!r}, mu_denom = {lc.mu_denom!r}"
        )
    except NoNegativeRoot as exc:
        lines.append(f"  lender solve failed: {exc}")
    b3, b2, b1, b0 = borrower_cubic(p, s, R_star)
    lines.append(f"borrower cubic: {b3!r} z^3 + {b2!r} z^2 + {b1!r} z + {b0!r} = 0")
    try:
        bc = solve_borrower(p, s, R_star)
        lines.append(
            f"  z = {bc.z!r}, y = {bc.y!r}, J = {bc.J!r}, lam_denom = {bc.lam_denom!r}"
        )
    except RootCountViolation as exc:
        lines.append(f"  borrower solve failed: {exc}")
    return "\n".join(lines)
