"""Kernel backend selection.

The compiled extension (capinflow._kernels, Cython) is preferred when it
imports cleanly; otherwise the pure-Python twin is used. Set
CAPINFLOW_BACKEND=python (or =cython) to force a choice.
"""
from __future__ import annotations

import os

from . import _kernels_py

_forced = os.environ.get("CAPINFLOW_BACKEND", "").strip().lower()

if _forced == "python":
    kernels = _kernels_py
elif _forced == "cython":
    from . import _kernels as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND_NAME

OK = kernels.OK
ERR_LENDER = kernels.ERR_LENDER
ERR_BORROWER = kernels.ERR_BORROWER
ERR_FX = kernels.ERR_FX
ERR_NO_SIGN_CHANGE = kernels.ERR_NO_SIGN_CHANGE
ERR_MAX_ITER = kernels.ERR_MAX_ITER


def pack_model(p, s) -> tuple:
    """Flatten (ModelParams, ShockMoments) into the kernel model vector."""
    return (
        p.B_D,
        p.gamma,
        p.R_D,
        p.r_tk_D,
        s.eps_mean,
        s.eps_var,
        p.B_U,
        p.beta,
        p.R_U,
        p.r_tk_U,
        s.e_ratio_mean,
        s.e_ratio_var,
        s.eta_mean,
        s.eta_var,
        float(p.K_U),
        float(p.m_D),
        float(p.m_U),
        p.r_U,
    )


def available_backends() -> dict[str, object]:
    """Importable kernel modules keyed by name (for parity tests/benchmarks)."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
