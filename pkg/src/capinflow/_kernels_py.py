"""Pure-Python numerical kernels for the per-period equilibrium solve.

This module is the reference implementation; capinflow._kernels is a compiled
twin with identical semantics. Both operate on a flat "model vector" of
floats (see pack_model in capinflow._backend) so the hot path carries no
object structure.

Model vector layout (indices):
    0  B_D      1  gamma    2  R_D      3  r_tk_D   4  eps_mean  5  eps_var
    6  B_U      7  beta     8  R_U      9  r_tk_U   10 er_mean   11 er_var
    12 eta_mean 13 eta_var  14 K_U      15 m_D      16 m_U       17 r_U

Status codes returned by kernels (0 means success):
    1  lender curvature: no unique negative root / invalid slope identity
    2  borrower curvature: negative-root count != 1 / invalid slope identity
    3  FX quadratic: negative discriminant
    4  loan-market gap has no sign change over the evaluable bracket
    5  fixed point exceeded the iteration cap
"""
from __future__ import annotations

import math

BACKEND_NAME = "python"

OK = 0
ERR_LENDER = 1
ERR_BORROWER = 2
ERR_FX = 3
ERR_NO_SIGN_CHANGE = 4
ERR_MAX_ITER = 5

_EPS = 2.220446049250313e-16


def _cbrt(x: float) -> float:
    if x >= 0.0:
        return x ** (1.0 / 3.0)
    return -((-x) ** (1.0 / 3.0))


def quad_roots(a: float, b: float, c: float) -> tuple[int, float, float]:
    """Real roots of a x^2 + b x + c, ascending. Returns (count, r1, r2)."""
    if a == 0.0:
        if b == 0.0:
            return 0, 0.0, 0.0
        r = -c / b
        return 1, r, r
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return 0, 0.0, 0.0
    sq = math.sqrt(disc)
    if b >= 0.0:
        q = -0.5 * (b + sq)
    else:
        q = -0.5 * (b - sq)
    r1 = q / a
    r2 = c / q if q != 0.0 else r1
    if r1 > r2:
        r1, r2 = r2, r1
    return 2, r1, r2


def cubic_real_roots(a3: float, a2: float, a1: float, a0: float) -> tuple[int, float, float, float]:
    """Real roots of a3 x^3 + a2 x^2 + a1 x + a0, ascending, Newton-polished.

    Returns (count, r1, r2, r3); unused slots are 0.
    """
    if a3 == 0.0:
        n, r1, r2 = quad_roots(a2, a1, a0)
        return n, r1, r2, 0.0
    p = a2 / a3
    q = a1 / a3
    r = a0 / a3
    # depressed cubic t^3 + pt*t + qt with x = t - p/3
    pt = q - p * p / 3.0
    qt = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r
    shift = p / 3.0
    disc = 0.25 * qt * qt + pt * pt * pt / 27.0
    roots = []
    if disc > 0.0:
        sq = math.sqrt(disc)
        t = _cbrt(-0.5 * qt + sq) + _cbrt(-0.5 * qt - sq)
        roots.append(t - shift)
    else:
        m = 2.0 * math.sqrt(max(-pt / 3.0, 0.0))
        if m == 0.0:
            roots.append(-shift)  # triple root
        else:
            arg = 3.0 * qt / (pt * m)
            arg = max(-1.0, min(1.0, arg))
            theta = math.acos(arg) / 3.0
            for k in range(3):
                roots.append(m * math.cos(theta - 2.0 * math.pi * k / 3.0) - shift)
    polished = []
    for x in roots:
        for _ in range(2):
            f = ((a3 * x + a2) * x + a1) * x + a0
            df = (3.0 * a3 * x + 2.0 * a2) * x + a1
            if df != 0.0:
                x -= f / df
        polished.append(x)
    polished.sort()
    out = polished + [0.0] * (3 - len(polished))
    return len(polished), out[0], out[1], out[2]


def lender_coeffs(mv, R: float) -> tuple[int, float, float, float, float]:
    """Lender value-function coefficients at rate R.

    The curvature c solves the quadratic obtained by matching the
    squared-funds coefficient of the lender Bellman recursion at the optimal
    portfolio:
        alpha c^2 - beta c + delta = 0
        alpha = 4 B^2 (Z^2+VV)(Z^2 + VV (1-T))
        beta  = 2 B g VV [(2-T) Z^2 + 2 VV (1-T)]
        delta = g^2 VV^2 (1-T),    T = B (1+R_D)^2
    A unique negative root exists iff T > 1 and alpha > 0; concavity of the
    value function requires the negative root.

    Returns (status, c, b, L, mu_denom).
    """
    B = mv[0]
    g = mv[1]
    RD = mv[2]
    rtk = mv[3]
    em = mv[4]
    ev = mv[5]
    Z = (1.0 + R) * em - (1.0 + RD)
    VV = (1.0 + R) * (1.0 + R) * ev
    T = B * (1.0 + RD) * (1.0 + RD)
    if T <= 1.0 or VV <= 0.0:
        return ERR_LENDER, 0.0, 0.0, 0.0, 0.0
    alpha = 4.0 * B * B * (Z * Z + VV) * (Z * Z + VV * (1.0 - T))
    bq = 2.0 * B * g * VV * ((2.0 - T) * Z * Z + 2.0 * VV * (1.0 - T))
    dq = g * g * VV * VV * (1.0 - T)
    n, r1, r2 = quad_roots(alpha, -bq, dq)
    c = 0.0
    n_neg = 0
    if n >= 1 and r1 < 0.0:
        n_neg += 1
        c = r1
    if n == 2 and r2 < 0.0:
        n_neg += 1
        c = r2
    if n_neg != 1:
        return ERR_LENDER, 0.0, 0.0, 0.0, 0.0
    mu_denom = (g - 2.0 * B * c) * VV - 2.0 * B * c * Z * Z
    ratio = (-2.0 * B * c * Z * Z) / mu_denom
    L = (1.0 + RD) * (1.0 - ratio)
    if 1.0 - B * L <= 0.0:
        return ERR_LENDER, 0.0, 0.0, 0.0, 0.0
    b = (1.0 - 2.0 * B * c * rtk) * L / (1.0 - B * L)
    return OK, c, b, L, mu_denom


def borrower_coeffs(mv, R: float) -> tuple[int, float, float, float, float, int]:
    """Borrower value-function coefficients at rate R.

    The curvature z is the unique negative real root of the cubic obtained
    by matching the squared-funds coefficient of the borrower Bellman
    recursion; the cubic expands the relation
        z D^2 = D^2 Q Vh (B z - bt/2) + 4 B^2 z^2 A^2 m^2 W (B z - bt/2)
                + B z m^2 (W (bt - 2 B z))^2
    where D = W bt - 2 B (A^2 + W) z is the policy denominator.

    Returns (status, z, y, J, lam_denom, n_negative_roots).
    """
    B = mv[6]
    bt = mv[7]
    RU = mv[8]
    rtk = mv[9]
    erm = mv[10]
    erv = mv[11]
    etm = mv[12]
    etv = mv[13]
    rU = mv[17]
    A = (1.0 + rU) - (1.0 + R) * erm
    W = (1.0 + R) * (1.0 + R) * erv
    Q = (1.0 + RU) * (1.0 + RU)
    m = (1.0 + RU) * etm
    M2 = m * m
    H = A * A + W
    d0 = W * bt
    d1 = -2.0 * B * H
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
    n, r1, r2, r3 = cubic_real_roots(a3, a2, a1, a0)
    z = 0.0
    n_neg = 0
    for root in (r1, r2, r3)[:n]:
        if root < 0.0:
            n_neg += 1
            z = root
    if n_neg != 1:
        return ERR_BORROWER, 0.0, 0.0, 0.0, 0.0, n_neg
    lam_denom = W * (bt - 2.0 * B * z) - 2.0 * B * z * A * A
    rho = (-2.0 * B * z * A * A) / lam_denom
    J = m * (1.0 - rho)
    if 1.0 - B * J <= 0.0:
        return ERR_BORROWER, 0.0, 0.0, 0.0, 0.0, n_neg
    y = J * (1.0 - 2.0 * B * z * rtk) / (1.0 - B * J)
    return OK, z, y, J, lam_denom, n_neg


def mu_star_raw(mv, R: float, F: float, c: float, b: float, mu_denom: float) -> float:
    """Lender portfolio fraction (unchecked) given solved coefficients."""
    B = mv[0]
    RD = mv[2]
    rtk = mv[3]
    em = mv[4]
    Z = (1.0 + R) * em - (1.0 + RD)
    num = Z * ((1.0 + B * b) + 2.0 * B * c * F * (1.0 + RD) - 2.0 * B * c * rtk)
    return num / (F * mu_denom)


def lambda_star_raw(mv, R: float, G: float, z: float, y: float, lam_denom: float) -> float:
    """Borrower portfolio fraction (unchecked) given solved coefficients."""
    B = mv[6]
    RU = mv[8]
    rtk = mv[9]
    erm = mv[10]
    etm = mv[12]
    KU = mv[14]
    rU = mv[17]
    A = (1.0 + rU) - (1.0 + R) * erm
    num = A * ((1.0 + B * y) + 2.0 * B * z * (1.0 + RU) * etm * G - 2.0 * B * z * rtk)
    return num / (KU * lam_denom)


def coeffs_valid(mv, R: float) -> bool:
    """Both sides' value-function coefficients exist at rate R."""
    if lender_coeffs(mv, R)[0] != OK:
        return False
    return borrower_coeffs(mv, R)[0] == OK


def valid_lower(mv, lo: float, hi: float) -> tuple[int, float]:
    """Lowest rate in [lo, hi] at which both coefficient systems are solvable.

    Validity is monotone in R over the bracket (the lender quadratic loses
    its negative root only near the bottom, where the lending spread is too
    small), so a bisection on validity locates the boundary.
    """
    if coeffs_valid(mv, lo):
        return OK, lo
    if not coeffs_valid(mv, hi):
        st = lender_coeffs(mv, hi)[0]
        return (st if st != OK else ERR_BORROWER), 0.0
    a, b = lo, hi
    for _ in range(80):
        mid = 0.5 * (a + b)
        if coeffs_valid(mv, mid):
            b = mid
        else:
            a = mid
    return OK, b


def loan_gap(mv, R: float, F: float, G: float, e: float) -> tuple[int, float, float, float]:
    """Loan-market gap at rate R: aggregate supply minus aggregate demand
    (both in foreign currency). Returns (status, gap, mu, lam)."""
    st, c, b, _L, mu_denom = lender_coeffs(mv, R)
    if st != OK:
        return st, 0.0, 0.0, 0.0
    st, z, y, _J, lam_denom, _n = borrower_coeffs(mv, R)
    if st != OK:
        return st, 0.0, 0.0, 0.0
    mu = mu_star_raw(mv, R, F, c, b, mu_denom)
    lam = lambda_star_raw(mv, R, G, z, y, lam_denom)
    gap = mv[15] * mu * F - mv[16] * lam * mv[14] / e
    return OK, gap, mu, lam


def fx_root(mv, lam: float, N0: float, N1: float, C: float) -> tuple[int, float]:
    """Larger positive root of the FX-market quadratic
    N1 e^2 - (N0 + C) e + m_U lam K_U = 0. Returns (status, e)."""
    b = N0 + C
    disc = b * b - 4.0 * N1 * (mv[16] * lam * mv[14])
    if disc < 0.0:
        return ERR_FX, 0.0
    return OK, (b + math.sqrt(disc)) / (2.0 * N1)


def _brent(mv, F, G, e, a, b, fa, fb, xtol):
    """Brent root finder on R -> loan gap; (a, b) must bracket a sign change."""
    c, fc = a, fa
    d = e_step = b - a
    while True:
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * xtol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return OK, b
        if abs(e_step) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e_step * q)):
                e_step = d
                d = p / q
            else:
                d = xm
                e_step = d
        else:
            d = xm
            e_step = d
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += tol1 if xm > 0.0 else -tol1
        st, fb, _, _ = loan_gap(mv, b, F, G, e)
        if st != OK:
            return st, 0.0
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e_step = b - a


def solve_rate(mv, e: float, F: float, G: float, lo: float, hi: float) -> tuple[int, float, float, float]:
    """Clearing rate for the loan market at exchange rate e.

    The coefficient systems may be unsolvable near the bottom of the bracket,
    so the search interval is first clipped to the evaluable sub-bracket.
    The gap must be negative at its bottom and positive at its top (supply
    shut off at the bottom of the bracket, demand shut off at the top).

    Returns (status, R, gap_lo, gap_hi).
    """
    st, lo_eff = valid_lower(mv, lo, hi)
    if st != OK:
        return st, 0.0, 0.0, 0.0
    st, gap_lo, _, _ = loan_gap(mv, lo_eff, F, G, e)
    if st != OK:
        return st, 0.0, 0.0, 0.0
    st, gap_hi, _, _ = loan_gap(mv, hi, F, G, e)
    if st != OK:
        return st, 0.0, 0.0, 0.0
    if gap_lo >= 0.0 or gap_hi <= 0.0:
        return ERR_NO_SIGN_CHANGE, 0.0, gap_lo, gap_hi
    st, root = _brent(mv, F, G, e, lo_eff, hi, gap_lo, gap_hi, 1e-13)
    return st, root, gap_lo, gap_hi


def solve_period(
    mv,
    F: float,
    G: float,
    C: float,
    N0: float,
    N1: float,
    lam0: float,
    lo: float,
    hi: float,
    tol: float = 1e-9,
    max_iter: int = 500,
    history=None,
):
    """Per-period fixed point: alternate (lam -> e -> R -> lam) to joint
    convergence of all three variables.

    The lam iterate is projected into [0, 1]; a 0.5 damping factor kicks in
    if the undamped update oscillates (sign of the lam step alternates twice
    in a row). Convergence: max(|d lam|, |d R|, |d e|/e) < tol.

    Returns (status, R, e, mu, lam_raw, iterations, resid_L1, resid_L2).
    history, if a list, receives (iter, lam, e, R, gap, fx_residual) rows.
    """
    st, lo_eff = valid_lower(mv, lo, hi)
    if st != OK:
        return st, 0.0, 0.0, 0.0, 0.0, 0, 0.0, 0.0
    lam = min(max(lam0, 1e-6), 1.0 - 1e-6)
    damping = 1.0
    prev_step = 0.0
    prev_prev_step = 0.0
    R_prev = math.nan
    e_prev = math.nan
    for it in range(1, max_iter + 1):
        st, e = fx_root(mv, lam, N0, N1, C)
        if st != OK:
            return st, 0.0, 0.0, 0.0, 0.0, it, 0.0, 0.0
        st, gap_lo, _, _ = loan_gap(mv, lo_eff, F, G, e)
        if st != OK:
            return st, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
        st, gap_hi, _, _ = loan_gap(mv, hi, F, G, e)
        if st != OK:
            return st, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
        if gap_lo >= 0.0 or gap_hi <= 0.0:
            return ERR_NO_SIGN_CHANGE, 0.0, e, 0.0, 0.0, it, gap_lo, gap_hi
        st, R = _brent(mv, F, G, e, lo_eff, hi, gap_lo, gap_hi, 1e-13)
        if st != OK:
            return st, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
        st, z, y, _J, lam_denom, _n = borrower_coeffs(mv, R)
        if st != OK:
            return st, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
        lam_raw = lambda_star_raw(mv, R, G, z, y, lam_denom)
        lam_proj = min(max(lam_raw, 0.0), 1.0)
        step = lam_proj - lam
        if prev_step * step < 0.0 and prev_prev_step * prev_step < 0.0:
            damping = 0.5
        lam_new = lam + damping * step
        if history is not None:
            stg, gap, _, _ = loan_gap(mv, R, F, G, e)
            fx_res = N1 * e * e - (N0 + C) * e + mv[16] * lam * mv[14]
            history.append((it, lam_new, e, R, gap if stg == OK else math.nan, fx_res))
        crit = abs(lam_new - lam)
        if not math.isnan(R_prev):
            crit = max(crit, abs(R - R_prev), abs(e - e_prev) / e)
            if crit < tol:
                stg, gap, mu, lam_fin = loan_gap(mv, R, F, G, e)
                if stg != OK:
                    return stg, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
                resid_L2 = N1 * e * e - (N0 + C) * e + mv[16] * lam_fin * mv[14]
                return OK, R, e, mu, lam_fin, it, gap, resid_L2
        prev_prev_step = prev_step
        prev_step = step
        lam, R_prev, e_prev = lam_new, R, e
    return ERR_MAX_ITER, 0.0, 0.0, 0.0, 0.0, max_iter, 0.0, 0.0
