"""Simulator behavior: exact rates, distributions, traces, determinism."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.stats

from dynrumor import graphs
from dynrumor.simulate import (
    Event,
    RumorState,
    SimConfig,
    SpreadTrace,
    first_transition_time,
    first_transition_times,
    instantaneous_rate,
    run,
    run_2push,
    run_async,
    run_forward_2push,
    run_sync,
)

ALPHA = 0.01
TRIALS = 4000


def static(g):
    return graphs.StaticSchedule(g)


def test_instantaneous_rate_frozen_values():
    assert instantaneous_rate(graphs.star_graph(4), [0]) == Fraction(4)
    assert instantaneous_rate(graphs.path_graph(3), [0]) == Fraction(3, 2)
    assert instantaneous_rate(graphs.complete_graph(4), [0, 1]) == Fraction(8, 3)
    assert instantaneous_rate(graphs.cycle_graph(6), [0]) == Fraction(2)
    assert instantaneous_rate(graphs.complete_graph(2), [0]) == Fraction(2)
    assert instantaneous_rate(graphs.path_graph(3), [0, 1, 2]) == Fraction(0)
    state = RumorState(frozenset({0}))
    assert instantaneous_rate(graphs.star_graph(4), state) == Fraction(4)


def test_k2_completion_is_exponential_mean_half():
    sched = static(graphs.complete_graph(2))
    times = np.array(
        [
            run_async(sched, SimConfig(seed=s, record_trace=False)).completion_time
            for s in range(TRIALS)
        ]
    )
    assert abs(times.mean() - 0.5) < 0.02
    _, p = scipy.stats.kstest(times, "expon", args=(0, 0.5))
    assert p > ALPHA


def test_first_transfer_is_exponential_at_the_cut_rate():
    cases = [
        (graphs.star_graph(5), [0]),  # rate 5
        (graphs.path_graph(3), [0]),  # rate 3/2
        (graphs.complete_graph(4), [0, 1]),  # rate 8/3
    ]
    seeds = np.arange(TRIALS)
    for g, informed in cases:
        lam = float(instantaneous_rate(g, informed))
        t = first_transition_times(g, informed, seeds)
        assert not np.isnan(t).any()
        _, p = scipy.stats.kstest(t, "expon", args=(0, 1.0 / lam))
        assert p > ALPHA, (g, informed, p)


def test_neighbor_choice_is_uniform():
    # first event from the star center must hit a uniform leaf
    g = graphs.star_graph(6)
    sched = static(g)
    counts = np.zeros(6, dtype=np.int64)
    for s in range(3000):
        tr = run_async(sched, SimConfig(seed=s))
        first = next(tr.events())
        if first.caller == 0:
            counts[first.callee] += 1
    _, p = scipy.stats.chisquare(counts[1:])
    assert p > ALPHA


def test_clock_persistence_matches_redrawn_clocks():
    # switching snapshots must not skew timing: persistent exponential
    # clocks and freshly redrawn ones are the same process
    seq = graphs.SequenceSchedule(
        [graphs.path_graph(6), graphs.cycle_graph(6), graphs.complete_graph(6)]
    )
    keep = np.array(
        [
            run_async(seq, SimConfig(seed=s, record_trace=False)).completion_time
            for s in range(2500)
        ]
    )
    redraw = np.array(
        [
            run_async(
                seq, SimConfig(seed=s + 500000, record_trace=False), _redraw=True
            ).completion_time
            for s in range(2500)
        ]
    )
    _, p = scipy.stats.ks_2samp(keep, redraw)
    assert p > ALPHA


def test_trace_is_deterministic_and_seed_sensitive():
    sched = static(graphs.cycle_graph(8))
    a = run_async(sched, SimConfig(seed=404))
    b = run_async(sched, SimConfig(seed=404))
    c = run_async(sched, SimConfig(seed=405))
    assert a == b
    assert a != c


def test_trace_replay_and_counts():
    sched = static(graphs.complete_graph(7))
    for s in range(30):
        tr = run_async(sched, SimConfig(seed=s))
        assert tr.replay_informed().sum() == 7
        counts = tr.informed_counts()
        assert counts[-1] == 7
        assert (np.diff(counts) >= 0).all()
        assert tr.first_time_count_at_least(1) == 0.0
        assert tr.first_time_count_at_least(7) == tr.completion_time
        assert tr.first_time_count_at_least(8) is None
        assert (np.diff(tr.times) >= 0).all()


def test_event_times_respect_horizon_and_snapshots():
    seq = graphs.SequenceSchedule([graphs.path_graph(8), graphs.complete_graph(8)])
    tr = run_async(seq, SimConfig(seed=3, horizon=2.5))
    assert np.all(tr.times < 2.5)
    big = run_async(seq, SimConfig(seed=3))
    if big.completion_time is not None and big.completion_time > 2.5:
        assert tr.completion_time is None


def test_completion_time_is_last_transfer():
    sched = static(graphs.complete_graph(5))
    tr = run_async(sched, SimConfig(seed=9))
    transfer_times = tr.times[tr.transferred.astype(bool)]
    assert tr.completion_time == transfer_times[-1]


def test_initial_informed_resolution():
    g = graphs.path_graph(4)
    tr = run_async(static(g), SimConfig(seed=0, initial_informed=[2]))
    assert tr.initial_informed == (2,)
    full = run_async(static(g), SimConfig(seed=0, initial_informed=range(4)))
    assert full.completion_time == 0.0
    assert len(full) == 0
    with pytest.raises(ValueError):
        run_async(static(g), SimConfig(seed=0, initial_informed=[]))
    with pytest.raises(ValueError):
        run_async(static(g), SimConfig(seed=0, initial_informed=[4]))


def test_single_vertex_completes_immediately():
    tr = run_async(static(graphs.empty_graph(1)), SimConfig(seed=0))
    assert tr.completion_time == 0.0


def test_disconnected_run_never_completes():
    g = graphs.graph_from_edge_list(4, [(0, 1)])
    tr = run_async(static(g), SimConfig(seed=1, horizon=30.0))
    assert tr.completion_time is None
    assert tr.replay_informed().sum() == 2
    # isolated vertices still tick, logged without a contact
    isolated_rows = (np.asarray(tr.callers) >= 2) & (np.asarray(tr.callees) == -1)
    assert isolated_rows.any()


def test_two_push_only_informed_vertices_call():
    sched = static(graphs.path_graph(5))
    for s in range(20):
        tr = run_2push(sched, SimConfig(protocol="async-2-push", seed=s))
        assert tr.completion_time is not None
        mask = np.zeros(5, dtype=bool)
        mask[list(tr.initial_informed)] = True
        for ev in tr.events():
            assert mask[ev.caller]  # push-only: callers already knew it
            if ev.transferred:
                assert not mask[ev.callee]
                mask[ev.callee] = True


def test_two_push_never_pulls():
    # an uninformed vertex contacting an informed one must not learn it:
    # on the path 0-1-2 with only the middle informed, vertex 0 and 2 can
    # only learn by the middle's own pushes
    g = graphs.path_graph(3)
    tr = run_2push(static(g), SimConfig(protocol="async-2-push", seed=8, initial_informed=[1]))
    for ev in tr.events():
        assert ev.caller == 1 or not ev.transferred


def test_sync_star_rounds_exact():
    star = graphs.star_graph(9)
    for s in range(40):
        tr = run_sync(static(star), SimConfig(protocol="sync-push-pull", seed=s))
        assert tr.completion_time == 1.0  # everyone pulls from the center
        tr2 = run_sync(
            static(star), SimConfig(protocol="sync-push-pull", seed=s, initial_informed=[3])
        )
        assert tr2.completion_time == 2.0  # push to center, then pulls
        assert tr2.replay_informed().sum() == 9


def test_sync_counts_deduplicate_within_round():
    star = graphs.star_graph(5)
    tr = run_sync(static(star), SimConfig(protocol="sync-push-pull", seed=2))
    counts = tr.informed_counts()
    assert counts[-1] == 5
    assert (np.diff(counts) >= 0).all()


def test_sync_respects_round_horizon():
    g = graphs.path_graph(40)
    tr = run_sync(static(g), SimConfig(protocol="sync-push-pull", seed=0, horizon=5))
    assert tr.completion_time is None
    assert tr.times.max() == 4.0


def test_forward_two_push_layer_discipline():
    edges = []
    layer = np.zeros(9, dtype=np.int32)
    for i in range(3):
        layer[3 + i] = 1
        layer[6 + i] = 2
        for j in range(3):
            edges.append((i, 3 + j))
            edges.append((3 + i, 6 + j))
    g = graphs.graph_from_edge_list(9, edges)
    tr = run_forward_2push(g, layer, SimConfig(protocol="forward-2-push", seed=5))
    assert tr.initial_informed == (0, 1, 2)
    for ev in tr.events():
        assert layer[ev.caller] < 2  # the last layer never calls
        if ev.callee >= 0:
            assert layer[ev.callee] == layer[ev.caller] + 1


def test_forward_two_push_rejects_other_starts():
    edges = [(0, 2), (0, 3), (1, 2), (1, 3)]
    g = graphs.graph_from_edge_list(4, edges)
    layer = np.array([0, 0, 1, 1], dtype=np.int32)
    with pytest.raises(ValueError):
        run_forward_2push(
            g, layer, SimConfig(protocol="forward-2-push", seed=0, initial_informed=[0])
        )
    with pytest.raises(ValueError):
        run_forward_2push(g, np.zeros(4, dtype=np.int32), SimConfig(seed=0))


def test_run_dispatches_by_protocol():
    g = graphs.complete_graph(3)
    assert run(static(g), SimConfig(protocol="async-push-pull", seed=1)).protocol == "async-push-pull"
    assert run(static(g), SimConfig(protocol="sync-push-pull", seed=1)).protocol == "sync-push-pull"
    assert run(static(g), SimConfig(protocol="async-2-push", seed=1)).protocol == "async-2-push"
    with pytest.raises(ValueError):
        SimConfig(protocol="telepathy")


def test_trace_jsonl_round_trip(tmp_path):
    tr = run_async(static(graphs.path_graph(4)), SimConfig(seed=2))
    path = tmp_path / "trace.jsonl"
    tr.to_jsonl(path)
    rows = [json.loads(line) for line in path.read_text().splitlines()]
    assert len(rows) == len(tr)
    for row, ev in zip(rows, tr.events()):
        assert row["time"] == ev.time
        assert row["caller"] == ev.caller
        assert row["callee"] == (None if ev.callee < 0 else ev.callee)
        assert row["transferred"] == ev.transferred


def test_first_transition_time_none_when_rate_zero():
    g = graphs.graph_from_edge_list(3, [(0, 1)])
    # informed component saturated: no cut edge, never a transfer
    assert first_transition_time(g, [0, 1], seed=3, horizon=5.0) is None


def test_memorylessness_of_first_transfer_under_state_reset():
    # starting fresh from the state reached after one transfer gives the
    # same law as continuing the run: check the second-transfer gap on the
    # path 0-1-2 against Exp(rate of {0,1} informed)
    g = graphs.path_graph(3)
    sched = static(g)
    gaps = []
    for s in range(TRIALS):
        tr = run_async(sched, SimConfig(seed=s))
        tt = tr.times[tr.transferred.astype(bool)]
        if len(tt) >= 2:
            gaps.append(tt[1] - tt[0])
    lam = float(instantaneous_rate(g, [0, 1]))
    _, p = scipy.stats.kstest(np.array(gaps), "expon", args=(0, 1.0 / lam))
    assert p > ALPHA


def test_event_namedtuple_shape():
    ev = Event(1.0, 2, 3, 1)
    assert ev.time == 1.0 and ev.caller == 2 and ev.callee == 3 and ev.transferred == 1


def test_spread_trace_repr_mentions_protocol():
    tr = run_async(static(graphs.complete_graph(2)), SimConfig(seed=0))
    assert "async-push-pull" in repr(tr)
    assert isinstance(tr, SpreadTrace)
