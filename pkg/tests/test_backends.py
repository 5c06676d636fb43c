"""Parity between the compiled kernel extension and its pure-Python twin."""
import numpy as np
import pytest

import capinflow as ci
from capinflow._backend import available_backends, pack_model

BACKENDS = available_backends()
needs_both = pytest.mark.skipif(
    len(BACKENDS) < 2, reason="compiled kernel extension not built"
)


def _mv():
    return pack_model(ci.BASELINE_PARAMS, ci.BASELINE_MOMENTS)


@needs_both
def test_root_helpers_agree():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = np.random.default_rng(7)
    for _ in range(500):
        a, b, c = rng.uniform(-5, 5, size=3)
        out_py = py.quad_roots(a, b, c)
        out_cy = cy.quad_roots(a, b, c)
        assert out_py[0] == out_cy[0]
        for x, y in zip(out_py[1:], out_cy[1:]):
            assert x == pytest.approx(y, abs=1e-12, rel=1e-12)
    for _ in range(500):
        a3, a2, a1, a0 = rng.uniform(-5, 5, size=4)
        out_py = py.cubic_real_roots(a3, a2, a1, a0)
        out_cy = cy.cubic_real_roots(a3, a2, a1, a0)
        assert out_py[0] == out_cy[0]
        for x, y in zip(sorted(out_py[1:]), sorted(out_cy[1:])):
            assert x == pytest.approx(y, abs=1e-9, rel=1e-9)


@needs_both
def test_coefficients_agree_across_bracket():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    mv = _mv()
    for R in np.linspace(0.118, 0.2499, 60):
        lp = py.lender_coeffs(mv, R)
        lc = cy.lender_coeffs(mv, R)
        assert lp[0] == lc[0]
        if lp[0] == 0:
            for x, y in zip(lp[1:], lc[1:]):
                assert x == pytest.approx(y, rel=1e-12)
        bp = py.borrower_coeffs(mv, R)
        bc = cy.borrower_coeffs(mv, R)
        assert bp[0] == bc[0]
        if bp[0] == 0:
            for x, y in zip(bp[1:5], bc[1:5]):
                assert x == pytest.approx(y, rel=1e-12)


@needs_both
def test_solve_period_agrees():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    mv = _mv()
    lo = 0.1170212765957448 + 1e-9
    hi = 0.25 - 1e-9
    rng = np.random.default_rng(11)
    for _ in range(25):
        N0 = rng.uniform(1100, 1200)
        N1 = rng.uniform(15, 18)
        C = rng.uniform(0.0, 4.0)
        lam0 = rng.uniform(0.01, 0.9)
        out_py = py.solve_period(mv, 10.0, 10.0, C, N0, N1, lam0, lo, hi)
        out_cy = cy.solve_period(mv, 10.0, 10.0, C, N0, N1, lam0, lo, hi)
        assert out_py[0] == out_cy[0] == 0
        for x, y in zip(out_py[1:5], out_cy[1:5]):
            assert x == pytest.approx(y, rel=1e-11, abs=1e-13)


@needs_both
def test_full_run_agrees(monkeypatch, baseline):
    """A whole simulation matches across backends to near machine precision."""
    import subprocess
    import sys

    code = (
        "import capinflow as ci, numpy as np\n"
        "s = ci.run(ci.BASELINE_PARAMS, ci.BASELINE_MOMENTS, seed=3)\n"
        "np.save('/tmp/_parity_{n}.npy', np.vstack([s.R_star, s.e, s.mu, s.lam]))\n"
    )
    import os

    for name in ("python", "cython"):
        env = dict(os.environ, CAPINFLOW_BACKEND=name)
        subprocess.run(
            [sys.executable, "-c", code.format(n=name)], env=env, check=True
        )
    a = np.load("/tmp/_parity_python.npy")
    b = np.load("/tmp/_parity_cython.npy")
    assert np.allclose(a, b, rtol=1e-11, atol=1e-13)
