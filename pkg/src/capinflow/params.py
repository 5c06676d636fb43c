"""Structural parameters, shock moment specifications, and config file I/O.

All quantities are per period. Deposits are constant over time, so the net
per-period deposit cost reduces to r_D*K_D (lender) and r_U*K_U (borrower).
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class ModelParams:
    """Structural constants of the two-country banking model.

    B_D, B_U   discount factors, developed / developing side, in (0, 1)
    gamma      risk aversion of developed-country banks (> 0)
    beta       risk aversion of developing-country banks (> 0)
    m_D, m_U   bank counts (>= 1)
    K_D, K_U   per-bank deposits, constant over time (> 0)
    R_D, r_D   developed-side loan / deposit rates (fractions > -1)
    R_U, r_U   developing-side loan / deposit rates (fractions > -1)
    R0_star    initial international rate
    e0         initial exchange rate (domestic per foreign unit, > 0)
    F0, G0     initial per-bank funds (> 0)
    horizon    number of simulated periods (>= 0)
    """

    B_D: float = 0.91
    B_U: float = 0.8
    gamma: float = 4.0
    beta: float = 1.0
    m_D: int = 10
    m_U: int = 100
    K_D: float = 10.0
    K_U: float = 20.0
    R_D: float = 0.05
    r_D: float = 0.04
    R_U: float = 0.2
    r_U: float = 0.15
    R0_star: float = 0.14
    e0: float = 75.0
    F0: float = 10.0
    G0: float = 10.0
    horizon: int = 30

    def __post_init__(self):
        problems = []
        if not 0.0 < self.B_D < 1.0:
            problems.append(f"B_D must be in (0,1), got {self.B_D}")
        if not 0.0 < self.B_U < 1.0:
            problems.append(f"B_U must be in (0,1), got {self.B_U}")
        if self.gamma <= 0:
            problems.append(f"gamma must be > 0, got {self.gamma}")
        if self.beta <= 0:
            problems.append(f"beta must be > 0, got {self.beta}")
        if self.m_D < 1 or int(self.m_D) != self.m_D:
            problems.append(f"m_D must be a positive integer, got {self.m_D}")
        if self.m_U < 1 or int(self.m_U) != self.m_U:
            problems.append(f"m_U must be a positive integer, got {self.m_U}")
        for name in ("R_D", "r_D", "R_U", "r_U", "R0_star"):
            if getattr(self, name) <= -1.0:
                problems.append(f"{name} must be > -1, got {getattr(self, name)}")
        for name in ("K_D", "K_U", "F0", "G0"):
            if getattr(self, name) <= 0:
                problems.append(f"{name} must be > 0, got {getattr(self, name)}")
        if self.e0 <= 0:
            problems.append(f"e0 must be > 0, got {self.e0}")
        if self.horizon < 0 or int(self.horizon) != self.horizon:
            problems.append(f"horizon must be a non-negative integer, got {self.horizon}")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def r_tk_D(self) -> float:
        """Net per-period deposit cost of a developed-country bank."""
        return (1.0 + self.r_D) * self.K_D - self.K_D

    @property
    def r_tk_U(self) -> float:
        """Net per-period funding cost of a developing-country bank."""
        return (1.0 + self.r_U) * self.K_U - self.K_U


@dataclass(frozen=True)
class ShockMoments:
    """Moment specifications of the stochastic inputs.

    eps_*        repayment factor on international loans (default shock)
    eta_*        productivity factor on domestic lending
    e_ratio_*    static expectation/variance of next-period over current
                 exchange rate
    N0_*, N1_*   uniform supports of the net-export intercept and slope
    """

    eps_mean: float = 0.94
    eps_var: float = 0.09
    eta_mean: float = 0.85
    eta_var: float = 0.09
    e_ratio_mean: float = 0.92
    e_ratio_var: float = 0.25
    N0_lo: float = 1100.0
    N0_hi: float = 1200.0
    N1_lo: float = 15.0
    N1_hi: float = 18.0

    def __post_init__(self):
        problems = []
        if not 0.0 < self.eps_mean <= 1.0:
            problems.append(f"eps_mean must be in (0,1], got {self.eps_mean}")
        if not 0.0 < self.eta_mean <= 1.0:
            problems.append(f"eta_mean must be in (0,1], got {self.eta_mean}")
        if self.e_ratio_mean <= 0:
            problems.append(f"e_ratio_mean must be > 0, got {self.e_ratio_mean}")
        for name in ("eps_var", "eta_var", "e_ratio_var"):
            if getattr(self, name) < 0:
                problems.append(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.N0_lo > self.N0_hi:
            problems.append(f"N0_lo {self.N0_lo} > N0_hi {self.N0_hi}")
        if not 0.0 < self.N1_lo <= self.N1_hi:
            problems.append(f"need 0 < N1_lo <= N1_hi, got ({self.N1_lo}, {self.N1_hi})")
        if problems:
            raise ConfigError("; ".join(problems))


BASELINE_PARAMS = ModelParams()
BASELINE_MOMENTS = ShockMoments()

_PARAM_FIELDS = {f.name: f.type for f in dataclasses.fields(ModelParams)}
_MOMENT_FIELDS = {f.name: f.type for f in dataclasses.fields(ShockMoments)}
_INT_FIELDS = {"m_D", "m_U", "horizon"}


def _coerce(key: str, raw: str):
    try:
        if key in _INT_FIELDS:
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc


def parse_overrides(pairs: dict[str, str] | dict[str, float]) -> tuple[dict, dict]:
    """Split a {key: value} mapping into (params, moments) override dicts.

    Unknown keys are an error so typos never pass silently.
    """
    p_over: dict = {}
    m_over: dict = {}
    for key, raw in pairs.items():
        value = _coerce(key, raw) if isinstance(raw, str) else raw
        if key in _PARAM_FIELDS:
            p_over[key] = value
        elif key in _MOMENT_FIELDS:
            m_over[key] = value
        else:
            raise ConfigError(f"unknown configuration key: {key!r}")
    return p_over, m_over


def apply_overrides(
    p: ModelParams, s: ShockMoments, overrides: dict[str, float]
) -> tuple[ModelParams, ShockMoments]:
    """Return copies of (p, s) with the given field overrides applied."""
    p_over, m_over = parse_overrides(overrides)
    if p_over:
        p = dataclasses.replace(p, **p_over)
    if m_over:
        s = dataclasses.replace(s, **m_over)
    return p, s


def load_config(path: str | Path) -> tuple[ModelParams, ShockMoments]:
    """Read a flat ``key = value`` config file.

    Missing keys keep their defaults; unknown keys raise ConfigError.
    Lines starting with '#' (or inline '#' suffixes) are comments.
    """
    pairs: dict[str, str] = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if key in pairs:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        pairs[key] = raw
    p_over, m_over = parse_overrides(pairs)
    return (
        dataclasses.replace(BASELINE_PARAMS, **p_over),
        dataclasses.replace(BASELINE_MOMENTS, **m_over),
    )


def write_config(path: str | Path, p: ModelParams, s: ShockMoments) -> None:
    """Write a config file that round-trips through load_config."""
    lines = ["# model parameters"]
    lines += [f"{f.name} = {getattr(p, f.name)!r}" for f in dataclasses.fields(p)]
    lines.append("")
    lines.append("# shock moments")
    lines += [f"{f.name} = {getattr(s, f.name)!r}" for f in dataclasses.fields(s)]
    Path(path).write_text("\n".join(lines) + "\n")
