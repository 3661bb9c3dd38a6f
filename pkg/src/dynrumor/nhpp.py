"""Non-homogeneous Poisson processes with piecewise-constant rates.

The transfer events of an asynchronous run form such a process whose rate
jumps whenever the informed set or the snapshot changes, so the counting
arguments used by the spreading-time bounds reduce to Poisson tails of the
integrated rate.  This module gives an exact sampler (thinning against the
peak rate) and the elementary lower-tail bound used by those arguments:

    Pr[X <= r/2] <= exp(-(1/2 - 1/e) * r)   for X ~ Poisson(r), r > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

#: decay constant of the lower-tail bound: 1/2 - 1/e
POISSON_TAIL_DECAY = 0.5 - math.exp(-1.0)


@dataclass(frozen=True)
class PiecewiseConstantRate:
    """Rate function equal to ``values[i]`` on [breakpoints[i], breakpoints[i+1]).

    ``breakpoints`` has one more entry than ``values``; the function is 0
    outside [breakpoints[0], breakpoints[-1]).
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if len(bp) != len(vals) + 1:
            raise ValueError("need exactly one more breakpoint than value")
        if len(vals) == 0:
            raise ValueError("need at least one piece")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(v < 0 for v in vals):
            raise ValueError("rates must be nonnegative")

    @property
    def start(self) -> float:
        return self.breakpoints[0]

    @property
    def end(self) -> float:
        return self.breakpoints[-1]

    @property
    def peak(self) -> float:
        return max(self.values)

    def rate_at(self, t: float) -> float:
        if t < self.start or t >= self.end:
            return 0.0
        i = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return self.values[i]

    def integral(self, t0: float | None = None, t1: float | None = None) -> float:
        """Integrated rate over [t0, t1] (defaults: the full support)."""
        t0 = self.start if t0 is None else float(t0)
        t1 = self.end if t1 is None else float(t1)
        if t1 <= t0:
            return 0.0
        total = 0.0
        for i, v in enumerate(self.values):
            lo = max(t0, self.breakpoints[i])
            hi = min(t1, self.breakpoints[i + 1])
            if hi > lo:
                total += v * (hi - lo)
        return total

    @classmethod
    def from_unit_segments(cls, values, start: float = 0.0) -> "PiecewiseConstantRate":
        vals = tuple(float(v) for v in values)
        bp = tuple(start + i for i in range(len(vals) + 1))
        return cls(bp, vals)


@dataclass(frozen=True)
class NhppSample:
    """One realization: accepted event times plus the thinning bookkeeping."""

    times: tuple[float, ...]
    proposals: int
    accepted: int

    @property
    def count(self) -> int:
        return len(self.times)


def sample_nhpp(rate: PiecewiseConstantRate, seed: int, rng: np.random.Generator | None = None) -> NhppSample:
    """Draw one realization by thinning a homogeneous process at the peak
    rate: candidate arrivals at rate ``rate.peak`` are kept with probability
    rate(t)/peak.  Exact for piecewise-constant rates."""
    if rng is None:
        rng = np.random.default_rng(seed)
    peak = rate.peak
    times: list[float] = []
    proposals = 0
    if peak > 0.0:
        t = rate.start
        while True:
            t += rng.exponential(1.0 / peak)
            if t >= rate.end:
                break
            proposals += 1
            if rng.random() * peak < rate.rate_at(t):
                times.append(t)
    return NhppSample(times=tuple(times), proposals=proposals, accepted=len(times))


def sample_nhpp_counts(rate: PiecewiseConstantRate, n_samples: int, seed: int) -> np.ndarray:
    """Event counts of ``n_samples`` independent realizations (shared
    generator, one stream)."""
    rng = np.random.default_rng(seed)
    out = np.empty(n_samples, dtype=np.int64)
    for i in range(n_samples):
        out[i] = sample_nhpp(rate, 0, rng=rng).count
    return out


def poisson_lower_tail_bound(r: float) -> float:
    """Upper bound on Pr[X <= r/2] for X ~ Poisson(r):
    exp(r * (1/e + 1/2 - 1)) = exp(-(1/2 - 1/e) * r).  Requires r > 0."""
    if r <= 0:
        raise ValueError("the bound needs a positive mean")
    return math.exp(-POISSON_TAIL_DECAY * float(r))


def poisson_lower_tail_exact(r: float) -> float:
    """Exact Pr[X <= floor(r/2)] for X ~ Poisson(r)."""
    if r <= 0:
        raise ValueError("need a positive mean")
    return float(stats.poisson.cdf(math.floor(r / 2.0), r))
