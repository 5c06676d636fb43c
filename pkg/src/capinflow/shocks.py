"""Shock distributions and seeded, reproducible draw streams.

The repayment and productivity factors are two-point random variables on
{lo, 1} with (lo, p_hi) chosen to match requested mean and variance. The
net-export coefficients are uniform. Each shock owns an independent named
substream of the seed, so comparative runs reuse identical net-export draws
while structural parameters change.
"""
from __future__ import annotations

import csv
import hashlib
import struct
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .errors import InfeasibleMoments
from .params import ShockMoments

MODES = ("deterministic-mean", "sampled")

# fixed substream order; changing it would silently re-seed every stream
_STREAM_KEYS = ("eps", "eta", "n0", "n1")


@dataclass(frozen=True)
class TwoPointDist:
    """Distribution on {lo, hi} with P(hi) = p_hi; hi is fixed at 1."""

    lo: float
    p_hi: float
    hi: float = 1.0

    @property
    def mean(self) -> float:
        return self.p_hi * self.hi + (1.0 - self.p_hi) * self.lo

    @property
    def variance(self) -> float:
        return self.p_hi * (1.0 - self.p_hi) * (self.hi - self.lo) ** 2

    def sample(self, rng: np.random.Generator, size: int | None = None):
        u = rng.random(size)
        return np.where(u < self.p_hi, self.hi, self.lo)


def two_point_from_moments(mean: float, variance: float) -> TwoPointDist:
    """Two-point law on {lo, 1} matching the requested moments exactly.

    Zero variance degenerates to a point mass at the mean (p_hi = 0,
    lo = mean). Raises InfeasibleMoments when no lo in [0, 1) works, which
    happens iff variance > mean*(1-mean).
    """
    if not 0.0 < mean <= 1.0:
        raise InfeasibleMoments(f"mean must be in (0, 1], got {mean}")
    if variance < 0.0:
        raise InfeasibleMoments(f"variance must be >= 0, got {variance}")
    if variance == 0.0:
        return TwoPointDist(lo=mean, p_hi=0.0)
    if mean == 1.0:
        raise InfeasibleMoments("mean 1 with positive variance is not realizable")
    # p_hi*(1-lo) = variance/(1-mean) and (1-p_hi)*(1-lo) = 1-mean
    one_minus_lo = (1.0 - mean) + variance / (1.0 - mean)
    lo = 1.0 - one_minus_lo
    if not 0.0 <= lo < 1.0:
        raise InfeasibleMoments(
            f"moments (mean={mean}, variance={variance}) force lo={lo:.6g} outside [0, 1)"
        )
    p_hi = (variance / (1.0 - mean)) / one_minus_lo
    dist = TwoPointDist(lo=lo, p_hi=p_hi)
    assert abs(dist.mean - mean) < 1e-12, "moment identity (mean) violated"
    assert abs(dist.variance - variance) < 1e-12, "moment identity (variance) violated"
    return dist


@dataclass(frozen=True)
class ShockDraw:
    """One period's realized shocks."""

    eps: float
    eta: float
    N0: float
    N1: float


class ShockStreams:
    """Seeded per-shock random streams for one simulation run.

    mode "deterministic-mean" uses the mean as the realized value for the
    repayment and productivity factors every period (their stream state is
    untouched); the net-export coefficients are always sampled. mode
    "sampled" draws the factors from their two-point laws, which requires
    the requested moments to be realizable.
    """

    def __init__(self, seed: int, moments: ShockMoments, mode: str = "deterministic-mean"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.seed = seed
        self.moments = moments
        self.mode = mode
        root = np.random.SeedSequence(seed)
        children = root.spawn(len(_STREAM_KEYS))
        self._rngs = {
            key: np.random.Generator(np.random.PCG64(child))
            for key, child in zip(_STREAM_KEYS, children)
        }
        if mode == "sampled":
            self.eps_dist = two_point_from_moments(moments.eps_mean, moments.eps_var)
            self.eta_dist = two_point_from_moments(moments.eta_mean, moments.eta_var)
        else:
            self.eps_dist = None
            self.eta_dist = None
        self._fingerprint = hashlib.sha256()
        self._log: list[ShockDraw] = []

    def draw(self) -> ShockDraw:
        m = self.moments
        if self.mode == "sampled":
            eps = float(self.eps_dist.sample(self._rngs["eps"]))
            eta = float(self.eta_dist.sample(self._rngs["eta"]))
        else:
            eps = m.eps_mean
            eta = m.eta_mean
        N0 = float(self._rngs["n0"].uniform(m.N0_lo, m.N0_hi))
        N1 = float(self._rngs["n1"].uniform(m.N1_lo, m.N1_hi))
        self._fingerprint.update(struct.pack("<dd", N0, N1))
        draw = ShockDraw(eps=eps, eta=eta, N0=N0, N1=N1)
        self._log.append(draw)
        return draw

    @property
    def fingerprint(self) -> str:
        """Digest of the net-export draws consumed so far (paired-run check)."""
        return self._fingerprint.hexdigest()

    @property
    def log(self) -> list[ShockDraw]:
        return list(self._log)


def draw_period(streams: ShockStreams) -> ShockDraw:
    """Draw one period's shocks from the named streams."""
    return streams.draw()


def dump_draws_csv(draws: Iterable[ShockDraw], out: IO[str]) -> None:
    """Audit dump: one row per period (period, eps, eta, N0, N1)."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["period", "eps", "eta", "N0", "N1"])
    for t, d in enumerate(draws, start=1):
        writer.writerow([t, repr(d.eps), repr(d.eta), repr(d.N0), repr(d.N1)])
