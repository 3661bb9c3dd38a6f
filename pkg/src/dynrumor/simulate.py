"""Rumor-spreading simulators.

Asynchronous protocols are event-driven: every vertex carries a rate-1 (or
rate-2) exponential clock; on a tick it contacts a uniform neighbour in the
snapshot live at that instant, and the rumor crosses the contacted edge
whenever exactly one endpoint knows it (push-pull), or only outward from the
caller (the two-push variants).  Clocks persist across snapshot switches --
exponential gaps are memoryless, so pending ticks stay valid when the graph
changes under them.  A tick at integer time t uses the snapshot of [t, t+1).

The synchronous protocol advances in rounds: in round t every vertex picks a
uniform neighbour of G^(t) and push and pull both resolve against the
informed set at the *start* of the round (no chaining within a round).

All randomness is counter-based (see _rng): runs are pure functions of the
seed.  Completion time is the time of the event that informs the last vertex
(sync: the number of executed rounds), or None if the horizon cuts off first.
"""

from __future__ import annotations

import json
import math
from collections import namedtuple
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from dynrumor import _kernels, _rng
from dynrumor._core_py import ClockEvent  # noqa: F401  (re-export)
from dynrumor.graphs import DynamicSchedule, Graph, StaticSchedule, as_informed_mask

PROTOCOLS = ("async-push-pull", "sync-push-pull", "async-2-push", "forward-2-push")
_ASYNC_CODES = {"async-push-pull": 0, "async-2-push": 1, "forward-2-push": 2}

_EMPTY_LAYER = np.zeros(0, dtype=np.int32)
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    """One simulation run, fully determined by this record."""

    protocol: str = "async-push-pull"
    seed: int = 0
    initial_informed: Sequence[int] | None = None  # None: the schedule's default
    horizon: float | None = None  # None: 10 * n
    record_trace: bool = True

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}; choose from {PROTOCOLS}")


@dataclass(frozen=True)
class RumorState:
    """Informed set at a point in time (bookkeeping type)."""

    informed: frozenset[int]
    time: float = 0.0

    @property
    def count(self) -> int:
        return len(self.informed)

    def mask(self, n: int) -> np.ndarray:
        return as_informed_mask(n, self.informed)

    @classmethod
    def from_mask(cls, mask: np.ndarray, time: float = 0.0) -> "RumorState":
        return cls(frozenset(int(v) for v in np.flatnonzero(mask)), time)


Event = namedtuple("Event", ("time", "caller", "callee", "transferred"))


class SpreadTrace:
    """Event log of one run: (time, caller, callee, transferred) rows.

    callee -1 marks a tick with nobody to contact.  ``completion_time`` is
    None when the horizon expired first.  Traces from runs with identical
    inputs compare equal.
    """

    __slots__ = (
        "n",
        "protocol",
        "seed",
        "initial_informed",
        "horizon",
        "times",
        "callers",
        "callees",
        "transferred",
        "completion_time",
    )

    def __init__(
        self,
        n,
        protocol,
        seed,
        initial_informed,
        horizon,
        times,
        callers,
        callees,
        transferred,
        completion_time,
    ):
        self.n = n
        self.protocol = protocol
        self.seed = seed
        self.initial_informed = tuple(initial_informed)
        self.horizon = horizon
        self.times = times
        self.callers = callers
        self.callees = callees
        self.transferred = transferred
        self.completion_time = completion_time
        for arr in (times, callers, callees, transferred):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.times)

    def events(self):
        for i in range(len(self.times)):
            yield Event(
                float(self.times[i]),
                int(self.callers[i]),
                int(self.callees[i]),
                int(self.transferred[i]),
            )

    def informed_counts(self) -> np.ndarray:
        """Number of informed vertices after each event.

        Synchronous rounds resolve every contact against the start-of-round
        informed set, so two contacts may inform the same vertex in one
        round; counts are deduplicated accordingly.
        """
        if self.protocol != "sync-push-pull":
            return len(self.initial_informed) + np.cumsum(self.transferred, dtype=np.int64)
        counts = np.empty(len(self.times), dtype=np.int64)
        mask = np.zeros(self.n, dtype=np.uint8)
        for v in self.initial_informed:
            mask[v] = 1
        count = len(self.initial_informed)
        round_start = mask.copy()
        current_round = None
        for i in range(len(self.times)):
            if self.times[i] != current_round:
                round_start = mask.copy()
                current_round = self.times[i]
            if self.transferred[i]:
                a = int(self.callers[i])
                b = int(self.callees[i])
                w = b if round_start[a] else a
                if not mask[w]:
                    mask[w] = 1
                    count += 1
            counts[i] = count
        return counts

    def first_time_count_at_least(self, target: int) -> float | None:
        """Earliest time the informed count reaches ``target`` (0.0 if it
        already starts there, None if it never does)."""
        if len(self.initial_informed) >= target:
            return 0.0
        counts = self.informed_counts()
        if len(counts) == 0 or counts[-1] < target:
            return None
        return float(self.times[int(np.argmax(counts >= target))])

    def replay_informed(self) -> np.ndarray:
        """Re-derive the final informed mask from the event log, validating
        every row against the protocol's transfer rule."""
        mask = np.zeros(self.n, dtype=np.uint8)
        for v in self.initial_informed:
            mask[v] = 1
        sync = self.protocol == "sync-push-pull"
        round_start = mask.copy()
        current_round = None
        for i in range(len(self.times)):
            a = int(self.callers[i])
            b = int(self.callees[i])
            if sync and self.times[i] != current_round:
                round_start = mask.copy()
                current_round = self.times[i]
            ref = round_start if sync else mask
            if self.transferred[i]:
                if b < 0 or ref[a] == ref[b]:
                    raise ValueError(f"inconsistent transfer event at index {i}")
                mask[a] = 1
                mask[b] = 1
            elif b >= 0 and ref[a] != ref[b]:
                raise ValueError(f"missed transfer at index {i}")
        return mask

    def to_jsonl(self, path) -> None:
        close = False
        if hasattr(path, "write"):
            fh = path
        else:
            fh = open(path, "w")
            close = True
        try:
            for i in range(len(self.times)):
                callee = int(self.callees[i])
                fh.write(
                    json.dumps(
                        {
                            "time": float(self.times[i]),
                            "caller": int(self.callers[i]),
                            "callee": None if callee < 0 else callee,
                            "transferred": int(self.transferred[i]),
                        },
                        separators=(",", ":"),
                    )
                )
                fh.write("\n")
        finally:
            if close:
                fh.close()

    def __eq__(self, other):
        if not isinstance(other, SpreadTrace):
            return NotImplemented
        return (
            self.n == other.n
            and self.protocol == other.protocol
            and self.seed == other.seed
            and self.initial_informed == other.initial_informed
            and self.horizon == other.horizon
            and self.completion_time == other.completion_time
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.callers, other.callers)
            and np.array_equal(self.callees, other.callees)
            and np.array_equal(self.transferred, other.transferred)
        )

    def __repr__(self):
        return (
            f"SpreadTrace(n={self.n}, protocol={self.protocol!r}, "
            f"events={len(self)}, completion_time={self.completion_time})"
        )


def _resolve_initial(schedule: DynamicSchedule, config: SimConfig) -> tuple[int, ...]:
    raw = config.initial_informed
    if raw is None:
        raw = schedule.default_initial
    if isinstance(raw, RumorState):
        raw = raw.informed
    initial = tuple(sorted({int(v) for v in raw}))
    if not initial:
        raise ValueError("initial informed set is empty")
    if initial[0] < 0 or initial[-1] >= schedule.n:
        raise ValueError(f"initial informed vertices outside 0..{schedule.n - 1}")
    return initial


def _resolve_horizon(schedule: DynamicSchedule, config: SimConfig) -> float:
    horizon = 10.0 * schedule.n if config.horizon is None else float(config.horizon)
    if horizon < 0 or math.isnan(horizon):
        raise ValueError(f"invalid horizon {horizon}")
    return horizon


def _grow(arrays, new_cap):
    out = []
    for arr in arrays:
        bigger = np.empty(new_cap, dtype=arr.dtype)
        bigger[: len(arr)] = arr
        out.append(bigger)
    return out


def _event_driver(
    schedule: DynamicSchedule,
    config: SimConfig,
    protocol_code: int,
    layer_arr: np.ndarray = _EMPTY_LAYER,
    k_limit: int = 0,
    stop_mode: int = 0,
    redraw: bool = False,
):
    """Shared driver for the asynchronous protocols.

    Returns (trace, stop_time): stop_time is the first-transfer time when
    stop_mode=1 (None if none happened before the horizon).
    """
    n = schedule.n
    initial = _resolve_initial(schedule, config)
    horizon = _resolve_horizon(schedule, config)
    seed = config.seed & _SEED_MASK
    rate = 1.0 if protocol_code == 0 else 2.0

    informed = np.zeros(n, dtype=np.uint8)
    informed[list(initial)] = 1
    count = len(initial)

    verts = np.arange(n, dtype=np.int64)
    next_time = -np.log(_rng.keyed_uniform_vec(seed, _rng.TICK, verts, 0)) / rate
    if protocol_code == 2:
        next_time[layer_arr >= k_limit] = np.inf
        next_time[layer_arr < 0] = np.inf
    tick_seq = np.zeros(n, dtype=np.int64)

    record = 1 if config.record_trace else 0
    cap = 4096 if record else 0
    tr_time = np.empty(cap, dtype=np.float64)
    tr_caller = np.empty(cap, dtype=np.int32)
    tr_callee = np.empty(cap, dtype=np.int32)
    tr_flag = np.empty(cap, dtype=np.uint8)
    tr_len = 0

    completion = 0.0 if count == n else None
    stop_time_out = 0.0 if (stop_mode == 1 and count == n) else None
    t = 0
    while completion is None and t < horizon:
        if redraw and t > 0:
            fresh = t - np.log(_rng.keyed_uniform_vec(seed, _rng.REDRAW, verts, t)) / rate
            if protocol_code == 2:
                fresh[layer_arr >= k_limit] = np.inf
                fresh[layer_arr < 0] = np.inf
            np.copyto(next_time, fresh)
        g = schedule.graph_at(t, informed)
        if g.n != n:
            raise ValueError(f"schedule produced a graph with n={g.n}, expected {n}")
        indptr, indices = g.csr()
        t_end = min(float(t + 1), horizon)
        while True:
            status, count, stop_time, tr_len = _kernels.async_segment(
                indptr,
                indices,
                layer_arr,
                k_limit,
                informed,
                count,
                next_time,
                tick_seq,
                t_end,
                seed,
                protocol_code,
                stop_mode,
                record,
                tr_time,
                tr_caller,
                tr_callee,
                tr_flag,
                tr_len,
            )
            if status == _kernels.STATUS_TRACE_FULL:
                cap = max(2 * cap, 4096)
                tr_time, tr_caller, tr_callee, tr_flag = _grow(
                    (tr_time, tr_caller, tr_callee, tr_flag), cap
                )
                continue
            break
        if status == _kernels.STATUS_STOPPED:
            if count == n:
                completion = stop_time
            stop_time_out = stop_time
            break
        t += 1

    trace = SpreadTrace(
        n=n,
        protocol=config.protocol,
        seed=config.seed,
        initial_informed=initial,
        horizon=horizon,
        times=tr_time[:tr_len].copy(),
        callers=tr_caller[:tr_len].copy(),
        callees=tr_callee[:tr_len].copy(),
        transferred=tr_flag[:tr_len].copy(),
        completion_time=completion,
    )
    return trace, stop_time_out


def run_async(schedule: DynamicSchedule, config: SimConfig, *, _redraw: bool = False) -> SpreadTrace:
    """Asynchronous push-pull (the ``_redraw`` flag is a test hook that
    redraws all pending ticks at every integer boundary; distributionally
    equivalent to the default persistent clocks)."""
    if config.protocol != "async-push-pull":
        config = replace(config, protocol="async-push-pull")
    trace, _ = _event_driver(schedule, config, 0, redraw=_redraw)
    return trace


def run_2push(schedule: DynamicSchedule, config: SimConfig) -> SpreadTrace:
    """Rate-2 push-only variant."""
    if config.protocol != "async-2-push":
        config = replace(config, protocol="async-2-push")
    trace, _ = _event_driver(schedule, config, 1)
    return trace


def _layer_array(n: int, layers) -> tuple[np.ndarray, int]:
    arr = getattr(layers, "layer_of", layers)
    arr = np.ascontiguousarray(np.asarray(arr, dtype=np.int32))
    if arr.shape != (n,):
        raise ValueError(f"layer labelling has shape {arr.shape}, expected ({n},)")
    k = int(arr.max())
    if k < 1:
        raise ValueError("forward protocol needs at least two layers")
    return arr, k


def run_forward_2push(graph: Graph | DynamicSchedule, layers, config: SimConfig) -> SpreadTrace:
    """Forward two-push on a layered graph: informed vertices of layer i
    push (rate 2) to uniform neighbours of layer i+1; the last layer is
    silent.  The rumor must start as exactly the first layer."""
    schedule = graph if isinstance(graph, DynamicSchedule) else StaticSchedule(graph)
    layer_arr, k = _layer_array(schedule.n, layers)
    layer0 = tuple(int(v) for v in np.flatnonzero(layer_arr == 0))
    if config.initial_informed is None:
        config = replace(config, initial_informed=layer0)
    elif tuple(sorted(int(v) for v in config.initial_informed)) != layer0:
        raise ValueError("forward two-push starts from exactly the first layer")
    if config.protocol != "forward-2-push":
        config = replace(config, protocol="forward-2-push")
    trace, _ = _event_driver(schedule, config, 2, layer_arr=layer_arr, k_limit=k)
    return trace


def run_sync(schedule: DynamicSchedule, config: SimConfig) -> SpreadTrace:
    """Synchronous push-pull rounds; completion_time counts executed rounds."""
    if config.protocol != "sync-push-pull":
        config = replace(config, protocol="sync-push-pull")
    n = schedule.n
    initial = _resolve_initial(schedule, config)
    horizon = _resolve_horizon(schedule, config)
    seed = config.seed & _SEED_MASK

    informed = np.zeros(n, dtype=np.uint8)
    informed[list(initial)] = 1
    count = len(initial)
    verts = np.arange(n, dtype=np.int64)
    record = config.record_trace
    chunks: list[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = []

    completion = 0.0 if count == n else None
    t = 0
    while completion is None and t < horizon:
        g = schedule.graph_at(t, informed)
        if g.n != n:
            raise ValueError(f"schedule produced a graph with n={g.n}, expected {n}")
        degs = g.degrees
        has = degs > 0
        if g.m > 0:
            indptr, indices = g.csr()
            u = _rng.keyed_uniform_vec(seed, _rng.SYNC, verts, t)
            offs = np.minimum((u * degs).astype(np.int64), degs - 1)
            idx = np.where(has, indptr[:-1] + offs, 0)
            targets = np.where(has, indices[idx], -1).astype(np.int32)
        else:
            targets = np.full(n, -1, dtype=np.int32)
        start = informed.astype(bool)
        target_informed = np.zeros(n, dtype=bool)
        np.take(start, np.where(has, targets, 0), out=target_informed)
        target_informed &= has
        # push from informed callers, pull by uninformed callers
        informed[targets[start & has]] = 1
        informed[(~start) & target_informed] = 1
        if record:
            moved = (start != target_informed) & has
            chunks.append(
                (
                    np.full(n, float(t)),
                    verts.astype(np.int32),
                    targets,
                    moved.astype(np.uint8),
                )
            )
        count = int(informed.sum())
        if count == n:
            completion = float(t + 1)
        t += 1

    if chunks:
        times = np.concatenate([c[0] for c in chunks])
        callers = np.concatenate([c[1] for c in chunks])
        callees = np.concatenate([c[2] for c in chunks])
        flags = np.concatenate([c[3] for c in chunks])
    else:
        times = np.empty(0, dtype=np.float64)
        callers = np.empty(0, dtype=np.int32)
        callees = np.empty(0, dtype=np.int32)
        flags = np.empty(0, dtype=np.uint8)
    return SpreadTrace(
        n=n,
        protocol=config.protocol,
        seed=config.seed,
        initial_informed=initial,
        horizon=horizon,
        times=times,
        callers=callers,
        callees=callees,
        transferred=flags,
        completion_time=completion,
    )


def run(schedule: DynamicSchedule, config: SimConfig, layers=None) -> SpreadTrace:
    """Dispatch on ``config.protocol``."""
    if config.protocol == "async-push-pull":
        return run_async(schedule, config)
    if config.protocol == "sync-push-pull":
        return run_sync(schedule, config)
    if config.protocol == "async-2-push":
        return run_2push(schedule, config)
    if config.protocol == "forward-2-push":
        if layers is None:
            layers = getattr(schedule, "layers", None)
            if layers is None:
                raise ValueError("forward-2-push needs a layer labelling")
        return run_forward_2push(schedule, layers, config)
    raise ValueError(f"unknown protocol {config.protocol!r}")


def instantaneous_rate(g: Graph, informed) -> Fraction:
    """Exact total rate of transfer events: sum over cut edges of
    1/deg(u) + 1/deg(v), for the cut between informed and uninformed."""
    if isinstance(informed, RumorState):
        informed = informed.informed
    mask = as_informed_mask(g.n, informed)
    total = Fraction(0)
    degs = g.degrees
    for u, v in g.edges():
        if mask[u] != mask[v]:
            total += Fraction(1, int(degs[u])) + Fraction(1, int(degs[v]))
    return total


def first_transition_time(
    graph: Graph, informed, seed: int, horizon: float | None = None
) -> float | None:
    """Time of the first rumor transfer of an async push-pull run started
    from the given informed set (None if the horizon expires first)."""
    schedule = StaticSchedule(graph)
    config = SimConfig(
        protocol="async-push-pull",
        seed=seed,
        initial_informed=tuple(as_informed_mask(graph.n, informed).nonzero()[0]),
        horizon=horizon,
        record_trace=False,
    )
    _, stop_time = _event_driver(schedule, config, 0, stop_mode=1)
    return stop_time


def first_transition_times(graph: Graph, informed, seeds) -> np.ndarray:
    """Vector of first-transfer times over many seeds (NaN = horizon hit)."""
    out = np.empty(len(seeds), dtype=np.float64)
    for i, s in enumerate(seeds):
        t = first_transition_time(graph, informed, int(s))
        out[i] = np.nan if t is None else t
    return out
