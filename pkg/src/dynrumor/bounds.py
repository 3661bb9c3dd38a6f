"""Spreading-time upper bounds built from per-snapshot graph metrics.

Two certified bounds are computed from a realized schedule prefix, both as
minimal crossing indices of a cumulative per-step score:

* the conductance--diligence bound ``T(c)``: the first step ``t`` such that
  ``sum_{p<=t} phi_p * rho_p >= C(c) * ln n`` with
  ``C(c) = (10c + 20) / (1/2 - 1/e)``.  A run completes by that step except
  with probability about ``n**-c``.
* the absolute bound ``T_abs``: the first step ``t`` such that
  ``sum_{p<=t} [connected_p] * rho_abs_p >= 2n``, evaluated in exact rational
  arithmetic.  This one holds with probability ``1 - o(1)`` without any
  conductance dependence beyond connectivity.

The per-step table (step, conductance, diligence, absolute diligence,
connected flag) is kept in the report so every crossing index can be
recomputed from it.  Schedules that eventually stop changing can be extended
analytically past the stored prefix instead of materializing the repeating
tail.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .graphs import DynamicSchedule, Graph, as_informed_mask
from .metrics import (
    DEFAULT_CAP,
    absolute_diligence,
    conductance_exact,
    diligence_exact,
)
from .nhpp import POISSON_TAIL_DECAY

__all__ = [
    "BoundReport",
    "BoundStep",
    "bound_report",
    "rate_lower_bound",
    "schedule_snapshots",
    "snapshot_metrics",
    "static_bound_report",
    "threshold_constant",
]


def threshold_constant(c: float) -> float:
    """The constant ``C(c) = (10c + 20) / (1/2 - 1/e)`` scaling ``ln n``."""
    c = float(c)
    if c <= 0:
        raise ValueError(f"confidence exponent must be positive, got c={c}")
    return (10.0 * c + 20.0) / POISSON_TAIL_DECAY


def rate_lower_bound(g: Graph, informed, cap: int = DEFAULT_CAP) -> Fraction:
    """Certified lower bound ``phi * rho * min(|I|, |U|)`` on the current
    aggregate transfer rate, as an exact rational.

    ``instantaneous_rate(g, informed)`` is always at least this value; the
    property is exercised rationally in the tests.
    """
    mask = as_informed_mask(g.n, informed)
    informed_count = int(mask.sum())
    uninformed_count = g.n - informed_count
    small = min(informed_count, uninformed_count)
    if small == 0:
        return Fraction(0)
    phi, _ = conductance_exact(g, cap)
    rho, _ = diligence_exact(g, cap)
    return phi * rho * small


@dataclass(frozen=True)
class BoundStep:
    """Metrics of one schedule step, the row unit of a bound report."""

    t: int
    conductance: Fraction
    diligence: Fraction
    absolute_diligence: Fraction
    connected: bool

    @property
    def diligence_term(self) -> Fraction:
        """Per-step contribution toward the conductance--diligence bound."""
        return self.conductance * self.diligence

    @property
    def absolute_term(self) -> Fraction:
        """Per-step contribution toward the absolute bound."""
        return self.absolute_diligence if self.connected else Fraction(0)


def _metrics_of(g: Graph, cap: int, memo: dict | None) -> tuple:
    if memo is not None and g in memo:
        return memo[g]
    phi, _ = conductance_exact(g, cap)
    rho, _ = diligence_exact(g, cap)
    rho_abs, _ = absolute_diligence(g)
    entry = (phi, rho, rho_abs, g.is_connected())
    if memo is not None:
        memo[g] = entry
    return entry


def snapshot_metrics(
    snapshots,
    cap: int = DEFAULT_CAP,
    memo: dict | None = None,
) -> tuple[BoundStep, ...]:
    """Per-step metric rows for a realized sequence of snapshots.

    ``memo`` (a dict keyed by :class:`Graph`) lets callers share the exact
    metric scans across steps and across trials that revisit the same graph.
    """
    steps = []
    for t, g in enumerate(snapshots):
        phi, rho, rho_abs, connected = _metrics_of(g, cap, memo)
        steps.append(
            BoundStep(
                t=t,
                conductance=phi,
                diligence=rho,
                absolute_diligence=rho_abs,
                connected=connected,
            )
        )
    return tuple(steps)


def schedule_snapshots(schedule: DynamicSchedule, length: int) -> list[Graph]:
    """The first ``length`` snapshots of a non-adaptive schedule.

    Adaptive schedules realize their snapshots only while a run drives them;
    wrap those in a recording schedule during simulation instead.
    """
    if length < 1:
        raise ValueError(f"need a positive prefix length, got {length}")
    if schedule.adaptive:
        raise ValueError(
            "adaptive schedules have no run-independent prefix; record the "
            "snapshots of an actual run instead"
        )
    return [schedule.graph_at(t) for t in range(length)]


@dataclass(frozen=True)
class BoundReport:
    """Crossing indices of both cumulative bounds over a schedule prefix.

    ``diligence_bound`` / ``absolute_bound`` are minimal step indices, or
    ``None`` when the corresponding score never crosses its target (within
    the prefix, or ever if the extended tail contributes nothing).  The
    ``*_extended`` flags mark indices that lie beyond the stored prefix and
    were obtained by repeating the final step's metrics.
    """

    n: int
    c: float
    steps: tuple[BoundStep, ...]
    diligence_target: float
    absolute_target: Fraction
    diligence_bound: int | None
    absolute_bound: int | None
    diligence_extended: bool
    absolute_extended: bool

    @property
    def combined_bound(self) -> int | None:
        """The smaller crossing index; either bound alone certifies it."""
        candidates = [
            b for b in (self.diligence_bound, self.absolute_bound) if b is not None
        ]
        return min(candidates) if candidates else None

    def rows(self) -> list[dict]:
        """The per-step table as plain dicts (rationals rendered ``p/q``)."""
        return [
            {
                "t": s.t,
                "conductance": str(s.conductance),
                "diligence": str(s.diligence),
                "absolute_diligence": str(s.absolute_diligence),
                "connected": int(s.connected),
            }
            for s in self.steps
        ]

    def to_json(self, indent: int | None = 2) -> str:
        payload = {
            "n": self.n,
            "c": self.c,
            "threshold_constant": threshold_constant(self.c),
            "diligence_target": self.diligence_target,
            "absolute_target": str(self.absolute_target),
            "diligence_bound": self.diligence_bound,
            "absolute_bound": self.absolute_bound,
            "combined_bound": self.combined_bound,
            "diligence_extended": self.diligence_extended,
            "absolute_extended": self.absolute_extended,
            "prefix_length": len(self.steps),
            "steps": self.rows(),
        }
        return json.dumps(payload, indent=indent, sort_keys=True)


def _crossing_float(terms, target: float) -> int | None:
    total = 0.0
    for t, term in enumerate(terms):
        total += term
        if total >= target:
            return t
    return None


def _crossing_exact(terms, target: Fraction) -> int | None:
    total = Fraction(0)
    for t, term in enumerate(terms):
        total += term
        if total >= target:
            return t
    return None


def bound_report(
    snapshots,
    c: float = 2.0,
    cap: int = DEFAULT_CAP,
    extend_frozen_tail: bool = False,
    memo: dict | None = None,
) -> BoundReport:
    """Evaluate both bounds over a realized prefix of schedule snapshots.

    With ``extend_frozen_tail`` the final snapshot is assumed to repeat at
    every step past the prefix, so a crossing that lies beyond the stored
    steps is located analytically.  That assumption is exact for schedules
    that stop changing -- in particular the built-in adaptive families once
    the rumor has saturated.
    """
    snapshots = list(snapshots)
    if not snapshots:
        raise ValueError("need at least one snapshot")
    n = snapshots[0].n
    steps = snapshot_metrics(snapshots, cap=cap, memo=memo)

    diligence_target = threshold_constant(c) * math.log(n)
    absolute_target = Fraction(2 * n)

    if n == 1:
        # A lone vertex starts informed; both bounds are immediate.
        return BoundReport(
            n=1,
            c=float(c),
            steps=steps,
            diligence_target=diligence_target,
            absolute_target=absolute_target,
            diligence_bound=0,
            absolute_bound=0,
            diligence_extended=False,
            absolute_extended=False,
        )

    dil_terms = [float(s.diligence_term) for s in steps]
    abs_terms = [s.absolute_term for s in steps]
    dil_bound = _crossing_float(dil_terms, diligence_target)
    abs_bound = _crossing_exact(abs_terms, absolute_target)
    dil_extended = False
    abs_extended = False

    if extend_frozen_tail:
        last = len(steps) - 1
        if dil_bound is None:
            remaining = diligence_target - sum(dil_terms)
            tail_term = dil_terms[-1]
            if tail_term > 0:
                dil_bound = last + math.ceil(remaining / tail_term)
                dil_extended = True
        if abs_bound is None:
            remaining_abs = absolute_target - sum(abs_terms, Fraction(0))
            tail_abs = abs_terms[-1]
            if tail_abs > 0:
                abs_bound = last + math.ceil(remaining_abs / tail_abs)
                abs_extended = True

    return BoundReport(
        n=n,
        c=float(c),
        steps=steps,
        diligence_target=diligence_target,
        absolute_target=absolute_target,
        diligence_bound=dil_bound,
        absolute_bound=abs_bound,
        diligence_extended=dil_extended,
        absolute_extended=abs_extended,
    )


def static_bound_report(
    g: Graph, c: float = 2.0, cap: int = DEFAULT_CAP, memo: dict | None = None
) -> BoundReport:
    """Bounds for a graph that never changes (one stored step, analytic tail).

    Frozen anchor: a star on ``n`` vertices has absolute diligence 1 at every
    step, so its absolute bound is exactly ``2n - 1``.
    """
    return bound_report([g], c=c, cap=cap, extend_frozen_tail=True, memo=memo)
