# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of capinflow._kernels_py (same functions, same semantics).

Keep the arithmetic in each routine in the same order as the pure-Python
reference so the two backends agree to the last few ulps.
"""
from libc.math cimport sqrt, acos, cos, pi, fabs, cbrt, NAN, isnan

BACKEND_NAME = "cython"

OK = 0
ERR_LENDER = 1
ERR_BORROWER = 2
ERR_FX = 3
ERR_NO_SIGN_CHANGE = 4
ERR_MAX_ITER = 5

cdef double _EPS = 2.220446049250313e-16

cdef int C_OK = 0
cdef int C_ERR_LENDER = 1
cdef int C_ERR_BORROWER = 2
cdef int C_ERR_FX = 3
cdef int C_ERR_NO_SIGN_CHANGE = 4
cdef int C_ERR_MAX_ITER = 5


cdef struct MV:
    double B_D
    double gamma
    double R_D
    double r_tk_D
    double eps_mean
    double eps_var
    double B_U
    double beta
    double R_U
    double r_tk_U
    double er_mean
    double er_var
    double eta_mean
    double eta_var
    double K_U
    double m_D
    double m_U
    double r_U


cdef void _fill(MV* m, tuple mv):
    m.B_D = mv[0]
    m.gamma = mv[1]
    m.R_D = mv[2]
    m.r_tk_D = mv[3]
    m.eps_mean = mv[4]
    m.eps_var = mv[5]
    m.B_U = mv[6]
    m.beta = mv[7]
    m.R_U = mv[8]
    m.r_tk_U = mv[9]
    m.er_mean = mv[10]
    m.er_var = mv[11]
    m.eta_mean = mv[12]
    m.eta_var = mv[13]
    m.K_U = mv[14]
    m.m_D = mv[15]
    m.m_U = mv[16]
    m.r_U = mv[17]


cdef int _quad_roots(double a, double b, double c, double* r1, double* r2) noexcept nogil:
    cdef double disc, sq, q, t
    r1[0] = 0.0
    r2[0] = 0.0
    if a == 0.0:
        if b == 0.0:
            return 0
        r1[0] = -c / b
        r2[0] = r1[0]
        return 1
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return 0
    sq = sqrt(disc)
    if b >= 0.0:
        q = -0.5 * (b + sq)
    else:
        q = -0.5 * (b - sq)
    r1[0] = q / a
    r2[0] = c / q if q != 0.0 else r1[0]
    if r1[0] > r2[0]:
        t = r1[0]
        r1[0] = r2[0]
        r2[0] = t
    return 2


cdef double _cbrt_c(double x) noexcept nogil:
    if x >= 0.0:
        return x ** (1.0 / 3.0)
    return -((-x) ** (1.0 / 3.0))


cdef int _cubic_real_roots(double a3, double a2, double a1, double a0,
                           double* out) noexcept nogil:
    cdef double p, q, r, pt, qt, shift, disc, sq, t, m, arg, theta, x, f, df, tmp
    cdef int n = 0
    cdef int i, j, k
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    if a3 == 0.0:
        n = _quad_roots(a2, a1, a0, &out[0], &out[1])
        return n
    p = a2 / a3
    q = a1 / a3
    r = a0 / a3
    pt = q - p * p / 3.0
    qt = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r
    shift = p / 3.0
    disc = 0.25 * qt * qt + pt * pt * pt / 27.0
    if disc > 0.0:
        sq = sqrt(disc)
        t = _cbrt_c(-0.5 * qt + sq) + _cbrt_c(-0.5 * qt - sq)
        out[0] = t - shift
        n = 1
    else:
        m = -pt / 3.0
        if m < 0.0:
            m = 0.0
        m = 2.0 * sqrt(m)
        if m == 0.0:
            out[0] = -shift
            n = 1
        else:
            arg = 3.0 * qt / (pt * m)
            if arg < -1.0:
                arg = -1.0
            if arg > 1.0:
                arg = 1.0
            theta = acos(arg) / 3.0
            for k in range(3):
                out[k] = m * cos(theta - 2.0 * pi * k / 3.0) - shift
            n = 3
    for i in range(n):
        x = out[i]
        for j in range(2):
            f = ((a3 * x + a2) * x + a1) * x + a0
            df = (3.0 * a3 * x + 2.0 * a2) * x + a1
            if df != 0.0:
                x -= f / df
        out[i] = x
    # insertion sort (n <= 3)
    for i in range(1, n):
        tmp = out[i]
        j = i - 1
        while j >= 0 and out[j] > tmp:
            out[j + 1] = out[j]
            j -= 1
        out[j + 1] = tmp
    return n


cdef int _lender(MV* mv, double R, double* c_out, double* b_out,
                 double* L_out, double* md_out) noexcept nogil:
    cdef double B = mv.B_D
    cdef double g = mv.gamma
    cdef double RD = mv.R_D
    cdef double rtk = mv.r_tk_D
    cdef double em = mv.eps_mean
    cdef double ev = mv.eps_var
    cdef double Z, VV, T, alpha, bq, dq, r1, r2, c, mu_denom, ratio, L, b
    cdef int n, n_neg
    Z = (1.0 + R) * em - (1.0 + RD)
    VV = (1.0 + R) * (1.0 + R) * ev
    T = B * (1.0 + RD) * (1.0 + RD)
    if T <= 1.0 or VV <= 0.0:
        return C_ERR_LENDER
    alpha = 4.0 * B * B * (Z * Z + VV) * (Z * Z + VV * (1.0 - T))
    bq = 2.0 * B * g * VV * ((2.0 - T) * Z * Z + 2.0 * VV * (1.0 - T))
    dq = g * g * VV * VV * (1.0 - T)
    n = _quad_roots(alpha, -bq, dq, &r1, &r2)
    c = 0.0
    n_neg = 0
    if n >= 1 and r1 < 0.0:
        n_neg += 1
        c = r1
    if n == 2 and r2 < 0.0:
        n_neg += 1
        c = r2
    if n_neg != 1:
        return C_ERR_LENDER
    mu_denom = (g - 2.0 * B * c) * VV - 2.0 * B * c * Z * Z
    ratio = (-2.0 * B * c * Z * Z) / mu_denom
    L = (1.0 + RD) * (1.0 - ratio)
    if 1.0 - B * L <= 0.0:
        return C_ERR_LENDER
    b = (1.0 - 2.0 * B * c * rtk) * L / (1.0 - B * L)
    c_out[0] = c
    b_out[0] = b
    L_out[0] = L
    md_out[0] = mu_denom
    return C_OK


cdef int _borrower(MV* mv, double R, double* z_out, double* y_out,
                   double* J_out, double* ld_out, int* nneg_out) noexcept nogil:
    cdef double B = mv.B_U
    cdef double bt = mv.beta
    cdef double RU = mv.R_U
    cdef double rtk = mv.r_tk_U
    cdef double erm = mv.er_mean
    cdef double erv = mv.er_var
    cdef double etm = mv.eta_mean
    cdef double etv = mv.eta_var
    cdef double rU = mv.r_U
    cdef double A, W, Q, m, M2, H, d0, d1, a0, a1, a2, a3
    cdef double z, lam_denom, rho, J, y
    cdef double roots[3]
    cdef int n, n_neg, i
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
    a2 = (2.0 * d0 * d1
          - Q * etv * (2.0 * B * d0 * d1 - 0.5 * bt * d1 * d1)
          + 2.0 * bt * B * B * W * A * A * M2
          - B * M2 * (2.0 * d0 * d1 + 4.0 * B * A * A * d0))
    a3 = (d1 * d1 * (1.0 - B * Q * etv - B * M2)
          - 4.0 * B * B * B * W * A * A * M2
          - B * M2 * (4.0 * B * B * A * A * A * A + 4.0 * B * A * A * d1))
    n = _cubic_real_roots(a3, a2, a1, a0, &roots[0])
    z = 0.0
    n_neg = 0
    for i in range(n):
        if roots[i] < 0.0:
            n_neg += 1
            z = roots[i]
    nneg_out[0] = n_neg
    if n_neg != 1:
        return C_ERR_BORROWER
    lam_denom = W * (bt - 2.0 * B * z) - 2.0 * B * z * A * A
    rho = (-2.0 * B * z * A * A) / lam_denom
    J = m * (1.0 - rho)
    if 1.0 - B * J <= 0.0:
        return C_ERR_BORROWER
    y = J * (1.0 - 2.0 * B * z * rtk) / (1.0 - B * J)
    z_out[0] = z
    y_out[0] = y
    J_out[0] = J
    ld_out[0] = lam_denom
    return C_OK


cdef double _mu_raw(MV* mv, double R, double F, double c, double b,
                    double mu_denom) noexcept nogil:
    cdef double Z = (1.0 + R) * mv.eps_mean - (1.0 + mv.R_D)
    cdef double num = Z * ((1.0 + mv.B_D * b)
                           + 2.0 * mv.B_D * c * F * (1.0 + mv.R_D)
                           - 2.0 * mv.B_D * c * mv.r_tk_D)
    return num / (F * mu_denom)


cdef double _lam_raw(MV* mv, double R, double G, double z, double y,
                     double lam_denom) noexcept nogil:
    cdef double A = (1.0 + mv.r_U) - (1.0 + R) * mv.er_mean
    cdef double num = A * ((1.0 + mv.B_U * y)
                           + 2.0 * mv.B_U * z * (1.0 + mv.R_U) * mv.eta_mean * G
                           - 2.0 * mv.B_U * z * mv.r_tk_U)
    return num / (mv.K_U * lam_denom)


cdef int _gap(MV* mv, double R, double F, double G, double e,
              double* gap, double* mu, double* lam) noexcept nogil:
    cdef double c, b, L, mu_denom, z, y, J, lam_denom
    cdef int st, n_neg
    st = _lender(mv, R, &c, &b, &L, &mu_denom)
    if st != C_OK:
        return st
    st = _borrower(mv, R, &z, &y, &J, &lam_denom, &n_neg)
    if st != C_OK:
        return st
    mu[0] = _mu_raw(mv, R, F, c, b, mu_denom)
    lam[0] = _lam_raw(mv, R, G, z, y, lam_denom)
    gap[0] = mv.m_D * mu[0] * F - mv.m_U * lam[0] * mv.K_U / e
    return C_OK


cdef int _fx(MV* mv, double lam, double N0, double N1, double C,
             double* e_out) noexcept nogil:
    cdef double b = N0 + C
    cdef double disc = b * b - 4.0 * N1 * (mv.m_U * lam * mv.K_U)
    if disc < 0.0:
        return C_ERR_FX
    e_out[0] = (b + sqrt(disc)) / (2.0 * N1)
    return C_OK


cdef bint _valid(MV* mv, double R) noexcept nogil:
    cdef double c, b, L, md, z, y, J, ld
    cdef int n_neg
    if _lender(mv, R, &c, &b, &L, &md) != C_OK:
        return False
    return _borrower(mv, R, &z, &y, &J, &ld, &n_neg) == C_OK


cdef int _valid_lower(MV* mv, double lo, double hi, double* lo_out) noexcept nogil:
    cdef double a, b, mid, cc, bb, LL, md
    cdef int i
    if _valid(mv, lo):
        lo_out[0] = lo
        return C_OK
    if not _valid(mv, hi):
        if _lender(mv, hi, &cc, &bb, &LL, &md) != C_OK:
            return C_ERR_LENDER
        return C_ERR_BORROWER
    a = lo
    b = hi
    for i in range(80):
        mid = 0.5 * (a + b)
        if _valid(mv, mid):
            b = mid
        else:
            a = mid
    lo_out[0] = b
    return C_OK


cdef int _brent_rate(MV* mv, double F, double G, double e,
                     double a, double b, double fa, double fb,
                     double xtol, double* root) noexcept nogil:
    cdef double c = a
    cdef double fc = fa
    cdef double d = b - a
    cdef double e_step = b - a
    cdef double tol1, xm, s, p, q, r, mu, lam, t
    cdef int st
    while True:
        if fabs(fc) < fabs(fb):
            t = b
            a = t
            b = c
            c = t
            t = fb
            fa = t
            fb = fc
            fc = t
        tol1 = 2.0 * _EPS * fabs(b) + 0.5 * xtol
        xm = 0.5 * (c - b)
        if fabs(xm) <= tol1 or fb == 0.0:
            root[0] = b
            return C_OK
        if fabs(e_step) >= tol1 and fabs(fa) > fabs(fb):
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
            p = fabs(p)
            if 2.0 * p < min(3.0 * xm * q - fabs(tol1 * q), fabs(e_step * q)):
                e_step = d
                d = p / q
            else:
                d = xm
                e_step = d
        else:
            d = xm
            e_step = d
        a = b
        fa = fb
        if fabs(d) > tol1:
            b += d
        else:
            b += tol1 if xm > 0.0 else -tol1
        st = _gap(mv, b, F, G, e, &fb, &mu, &lam)
        if st != C_OK:
            return st
        if (fb > 0.0) == (fc > 0.0):
            c = a
            fc = fa
            d = b - a
            e_step = b - a


cdef int _rate(MV* mv, double e, double F, double G, double lo, double hi,
               double* R_out, double* gap_lo_out, double* gap_hi_out) noexcept nogil:
    cdef double lo_eff, gap_lo, gap_hi, mu, lam
    cdef int st
    st = _valid_lower(mv, lo, hi, &lo_eff)
    if st != C_OK:
        return st
    st = _gap(mv, lo_eff, F, G, e, &gap_lo, &mu, &lam)
    if st != C_OK:
        return st
    st = _gap(mv, hi, F, G, e, &gap_hi, &mu, &lam)
    if st != C_OK:
        return st
    gap_lo_out[0] = gap_lo
    gap_hi_out[0] = gap_hi
    if gap_lo >= 0.0 or gap_hi <= 0.0:
        return C_ERR_NO_SIGN_CHANGE
    return _brent_rate(mv, F, G, e, lo_eff, hi, gap_lo, gap_hi, 1e-13, R_out)


# -- Python-visible wrappers (same signatures as capinflow._kernels_py) -----

def quad_roots(double a, double b, double c):
    cdef double r1, r2
    cdef int n = _quad_roots(a, b, c, &r1, &r2)
    return n, r1, r2


def cubic_real_roots(double a3, double a2, double a1, double a0):
    cdef double out[3]
    cdef int n = _cubic_real_roots(a3, a2, a1, a0, &out[0])
    return n, out[0], out[1], out[2]


def lender_coeffs(tuple mv, double R):
    cdef MV m
    cdef double c, b, L, md
    _fill(&m, mv)
    cdef int st = _lender(&m, R, &c, &b, &L, &md)
    if st != C_OK:
        return st, 0.0, 0.0, 0.0, 0.0
    return st, c, b, L, md


def borrower_coeffs(tuple mv, double R):
    cdef MV m
    cdef double z, y, J, ld
    cdef int n_neg = 0
    _fill(&m, mv)
    cdef int st = _borrower(&m, R, &z, &y, &J, &ld, &n_neg)
    if st != C_OK:
        return st, 0.0, 0.0, 0.0, 0.0, n_neg
    return st, z, y, J, ld, n_neg


def mu_star_raw(tuple mv, double R, double F, double c, double b, double mu_denom):
    cdef MV m
    _fill(&m, mv)
    return _mu_raw(&m, R, F, c, b, mu_denom)


def lambda_star_raw(tuple mv, double R, double G, double z, double y, double lam_denom):
    cdef MV m
    _fill(&m, mv)
    return _lam_raw(&m, R, G, z, y, lam_denom)


def coeffs_valid(tuple mv, double R):
    cdef MV m
    _fill(&m, mv)
    return bool(_valid(&m, R))


def valid_lower(tuple mv, double lo, double hi):
    cdef MV m
    cdef double out
    _fill(&m, mv)
    cdef int st = _valid_lower(&m, lo, hi, &out)
    if st != C_OK:
        return st, 0.0
    return st, out


def loan_gap(tuple mv, double R, double F, double G, double e):
    cdef MV m
    cdef double gap, mu, lam
    _fill(&m, mv)
    cdef int st = _gap(&m, R, F, G, e, &gap, &mu, &lam)
    if st != C_OK:
        return st, 0.0, 0.0, 0.0
    return st, gap, mu, lam


def fx_root(tuple mv, double lam, double N0, double N1, double C):
    cdef MV m
    cdef double e
    _fill(&m, mv)
    cdef int st = _fx(&m, lam, N0, N1, C, &e)
    if st != C_OK:
        return st, 0.0
    return st, e


def solve_rate(tuple mv, double e, double F, double G, double lo, double hi):
    cdef MV m
    cdef double R = 0.0
    cdef double gap_lo = 0.0
    cdef double gap_hi = 0.0
    _fill(&m, mv)
    cdef int st = _rate(&m, e, F, G, lo, hi, &R, &gap_lo, &gap_hi)
    if st == C_ERR_NO_SIGN_CHANGE:
        return st, 0.0, gap_lo, gap_hi
    if st != C_OK:
        return st, 0.0, 0.0, 0.0
    return st, R, gap_lo, gap_hi


def solve_period(tuple mv, double F, double G, double C, double N0, double N1,
                 double lam0, double lo, double hi, double tol=1e-9,
                 int max_iter=500, history=None):
    cdef MV m
    cdef double lam, damping, prev_step, prev_prev_step, R_prev, e_prev
    cdef double e, R, gap_lo, gap_hi, z, y, J, lam_denom
    cdef double lam_raw, lam_proj, step, lam_new, crit, gap, mu, lam_fin
    cdef double fx_res, resid_L2, lo_eff
    cdef int st, it, n_neg
    _fill(&m, mv)
    st = _valid_lower(&m, lo, hi, &lo_eff)
    if st != C_OK:
        return st, 0.0, 0.0, 0.0, 0.0, 0, 0.0, 0.0
    lam = min(max(lam0, 1e-6), 1.0 - 1e-6)
    damping = 1.0
    prev_step = 0.0
    prev_prev_step = 0.0
    R_prev = NAN
    e_prev = NAN
    for it in range(1, max_iter + 1):
        st = _fx(&m, lam, N0, N1, C, &e)
        if st != C_OK:
            return st, 0.0, 0.0, 0.0, 0.0, it, 0.0, 0.0
        st = _gap(&m, lo_eff, F, G, e, &gap_lo, &mu, &lam_fin)
        if st != C_OK:
            return st, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
        st = _gap(&m, hi, F, G, e, &gap_hi, &mu, &lam_fin)
        if st != C_OK:
            return st, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
        if gap_lo >= 0.0 or gap_hi <= 0.0:
            return C_ERR_NO_SIGN_CHANGE, 0.0, e, 0.0, 0.0, it, gap_lo, gap_hi
        st = _brent_rate(&m, F, G, e, lo_eff, hi, gap_lo, gap_hi, 1e-13, &R)
        if st != C_OK:
            return st, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
        st = _borrower(&m, R, &z, &y, &J, &lam_denom, &n_neg)
        if st != C_OK:
            return st, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
        lam_raw = _lam_raw(&m, R, G, z, y, lam_denom)
        lam_proj = min(max(lam_raw, 0.0), 1.0)
        step = lam_proj - lam
        if prev_step * step < 0.0 and prev_prev_step * prev_step < 0.0:
            damping = 0.5
        lam_new = lam + damping * step
        if history is not None:
            st = _gap(&m, R, F, G, e, &gap, &mu, &lam_fin)
            fx_res = N1 * e * e - (N0 + C) * e + m.m_U * lam * m.K_U
            history.append((it, lam_new, e, R, gap if st == C_OK else float("nan"), fx_res))
        crit = fabs(lam_new - lam)
        if not isnan(R_prev):
            crit = max(crit, fabs(R - R_prev), fabs(e - e_prev) / e)
            if crit < tol:
                st = _gap(&m, R, F, G, e, &gap, &mu, &lam_fin)
                if st != C_OK:
                    return st, 0.0, e, 0.0, 0.0, it, 0.0, 0.0
                resid_L2 = N1 * e * e - (N0 + C) * e + m.m_U * lam_fin * m.K_U
                return C_OK, R, e, mu, lam_fin, it, gap, resid_L2
        prev_prev_step = prev_step
        prev_step = step
        lam = lam_new
        R_prev = R
        e_prev = e
    return C_ERR_MAX_ITER, 0.0, 0.0, 0.0, 0.0, max_iter, 0.0, 0.0
