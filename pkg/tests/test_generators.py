"""Graph generators and schedule families: structural oracles.

Degrees, connectivity and component layouts of every generated object are
checked against hand-derived facts (degree multisets, layer sizes, bridge
endpoints), and adaptive families are driven with explicit informed masks
so their update rules are observed directly rather than through a run.
"""

from collections import Counter

import numpy as np
import pytest

from dynrumor import generators, metrics
from dynrumor.generators import (
    FAMILIES,
    absolute_lb_schedule,
    bipartite_string,
    bottleneck_graph,
    default_layer_count,
    diligence_lb_schedule,
    dynamic_star_schedule,
    expander_graph,
    load_schedule_dir,
    near_regular_graph,
    random_regular_connected,
    save_schedule_dir,
    two_clique_schedule,
)
from dynrumor.graphs import RecordingSchedule, SequenceSchedule, StaticSchedule, cycle_graph
from dynrumor.simulate import SimConfig, run


def degree_counts(g):
    return Counter(g.degree(v) for v in range(g.n))


# ---------------------------------------------------------------------------
# random regular graphs


def test_random_regular_degrees_and_connectivity():
    for n, d in [(6, 2), (8, 3), (9, 4), (12, 5), (20, 6), (10, 9)]:
        g = random_regular_connected(n, d, seed=41)
        assert degree_counts(g) == {d: n}
        assert g.is_connected()


def test_random_regular_deterministic_and_seed_sensitive():
    a = random_regular_connected(14, 5, seed=7)
    b = random_regular_connected(14, 5, seed=7)
    c = random_regular_connected(14, 5, seed=8)
    assert a == b
    assert a != c


def test_random_regular_rejects_bad_parameters():
    with pytest.raises(ValueError):
        random_regular_connected(7, 3, seed=0)  # n*d odd
    with pytest.raises(ValueError):
        random_regular_connected(5, 5, seed=0)  # d >= n


def test_random_regular_small_degree_shortcuts():
    assert random_regular_connected(9, 2, seed=3) == cycle_graph(9)
    g = random_regular_connected(2, 1, seed=3)
    assert g.n == 2 and g.m == 1


def test_near_regular_degree_multiset():
    for n, d_special in [(19, 2), (19, 6), (12, 8)]:
        g = near_regular_graph(n, 4, d_special, seed=11, special=3)
        assert g.degree(3) == d_special
        expected = Counter({4: n - 1})
        expected[d_special] += 1
        assert degree_counts(g) == expected
        assert g.is_connected()


def test_expander_graph_is_4_regular_with_good_cut():
    g = expander_graph(16, seed=5)
    assert degree_counts(g) == {4: 16}
    phi, _ = metrics.conductance_exact(g)
    assert phi >= 0.1
    assert expander_graph(16, seed=5) == g


# ---------------------------------------------------------------------------
# layered strings and bottleneck graphs


def test_bipartite_string_structure():
    for k, delta in [(3, 4), (5, 2), (1, 6)]:
        g, layers = bipartite_string(k, delta)
        assert g.n == (k + 1) * delta
        assert g.m == k * delta * delta
        assert layers.k == k
        for i in range(k + 1):
            assert len(layers.layer(i)) == delta
        for v in range(g.n):
            expected = delta if layers.layer_of[v] in (0, k) else 2 * delta
            assert g.degree(v) == expected


def test_bottleneck_graph_layout():
    g, layout = bottleneck_graph(48, k=3, delta=4, seed=9)
    assert g.is_connected()
    assert layout.k == 3 and layout.delta == 4
    assert set(layout.a_side) | set(layout.b_side) == set(range(48))
    assert not set(layout.a_side) & set(layout.b_side)
    assert len(layout.s0) == 4 and len(layout.sk) == 4
    assert set(layout.s0) <= set(layout.a_side)
    assert set(layout.sk) <= set(layout.b_side)
    # string interior only touches consecutive layers
    for i in range(1, 3):
        for v in layout.string.layer(i):
            for w in g.adj[v]:
                assert abs(int(layout.string.layer_of[w]) - i) == 1


# ---------------------------------------------------------------------------
# schedule families


def drive(schedule, masks):
    """Feed explicit informed masks step by step, returning the snapshots."""
    out = []
    for t, mask in enumerate(masks):
        out.append(schedule.graph_at(t, mask))
    return out


def test_dynamic_star_center_is_lowest_uninformed():
    sched = dynamic_star_schedule(6)
    n = sched.n  # 7 vertices: 6 leaves + the moving center
    mask = np.zeros(n, dtype=np.uint8)
    mask[1] = 1  # the default start
    g0 = sched.graph_at(0, mask)
    assert g0.degree(0) == n - 1  # vertex 0 is the first center
    mask = mask.copy()
    mask[[0, 2]] = 1
    g1 = sched.graph_at(1, mask)
    assert g1.degree(3) == n - 1  # lowest uninformed moved to 3
    full = np.ones(n, dtype=np.uint8)
    g2 = sched.graph_at(2, full)
    assert g2.degree(0) == n - 1  # everyone informed: falls back to 0


def test_two_clique_snapshots():
    sched = two_clique_schedule(8)
    total = sched.n
    assert total == 9
    g0 = sched.graph_at(0)
    assert g0.degree(8) == 1  # pendant rumor holder
    assert sorted(g0.adj[8]) == [0]
    assert g0.degree(0) == 8
    g1 = sched.graph_at(1)
    assert (0, 8) in set(g1.edges()) or (8, 0) in set(g1.edges())
    assert g1 == sched.graph_at(17)  # repeats forever
    low = {v for v in range(total) if 0 in g1.adj[v] or v == 0}
    assert len(low) == total // 2 + 1  # lower clique + the bridge partner


def test_absolute_lb_snapshot_degrees():
    # delta = 2: degrees {4: |A|-1, 3: 2, 2: |B|-1}; delta = 4: {4: n-2, 5: 2}
    for n, rho, expect in [
        (40, 1.0, lambda cnt, n: cnt[3] == 2 and cnt[2] + cnt[4] == n - 2),
        (40, 0.25, lambda cnt, n: cnt == {4: n - 2, 5: 2}),
    ]:
        sched = absolute_lb_schedule(n, rho, seed=13)
        g = sched.graph_at(0, sched.default_initial)
        cnt = degree_counts(g)
        assert expect(cnt, n), cnt
        assert g.is_connected()


def test_absolute_lb_update_rule_shrinks_then_freezes():
    sched = absolute_lb_schedule(36, 1.0, seed=2)
    n = sched.n
    g0 = sched.graph_at(0, sched.default_initial)
    b_size = n - n // 4
    # inform some B-side vertices: the family drops them from B next step
    mask = np.zeros(n, dtype=np.uint8)
    mask[list(sched.default_initial)] = 1
    mask[n - 4 :] = 1
    g1 = sched.graph_at(1, mask)
    assert g1 != g0
    # inform everyone: B empties below n/6 and the graph freezes
    g2 = sched.graph_at(2, np.ones(n, dtype=np.uint8))
    g3 = sched.graph_at(3, np.ones(n, dtype=np.uint8))
    assert g2 == g3


def test_diligence_lb_guarantee_on_sampled_cuts():
    # smallest feasible instance: every sampled cut has diligence >= requested
    sched = diligence_lb_schedule(28, 0.5, seed=4)
    assert sched.delta == 2  # ceil(1 / rho)
    assert sched.k == default_layer_count(28)
    g = sched.graph_at(0, sched.default_initial)
    assert g.is_connected()
    rng = np.random.default_rng(123)
    checked = 0
    for _ in range(300):
        size = int(rng.integers(1, g.n))
        subset = [int(v) for v in rng.choice(g.n, size=size, replace=False)]
        try:
            val = metrics.cut_diligence(g, subset)
        except ValueError:  # heavier side drawn: measure the complement
            subset = sorted(set(range(g.n)) - set(subset))
            val = metrics.cut_diligence(g, subset)
        if val is None:
            continue
        checked += 1
        assert val >= metrics.Fraction(1, 2), (subset, val)
    assert checked >= 250


def test_diligence_lb_freezes_when_b_exhausted():
    sched = diligence_lb_schedule(28, 1.0, seed=4)
    n = sched.n
    sched.graph_at(0, sched.default_initial)
    full = np.ones(n, dtype=np.uint8)
    g1 = sched.graph_at(1, full)
    assert g1 == sched.graph_at(2, full)


def test_family_runs_complete():
    for name, kwargs in [
        ("diligence-lb", {"n": 32, "rho": 0.5}),
        ("absolute-lb", {"n": 24, "rho": 0.5}),
        ("dynamic-star", {"n": 12}),
        ("two-clique", {"n": 10}),
    ]:
        sched = FAMILIES[name](seed=6, **kwargs)
        trace = run(sched.clone(seed=6), SimConfig(seed=6, record_trace=False))
        assert trace.completion_time is not None, name


# ---------------------------------------------------------------------------
# schedule directories


def test_family_schedule_dir_round_trip(tmp_path):
    sched = diligence_lb_schedule(32, 0.5, seed=9)
    save_schedule_dir(sched, tmp_path / "fam")
    loaded = load_schedule_dir(tmp_path / "fam")
    assert loaded.params() == sched.params()
    assert type(loaded) is type(sched)
    a = RecordingSchedule(sched.clone(seed=1))
    b = RecordingSchedule(loaded.clone(seed=1))
    run(a, SimConfig(seed=1, record_trace=False))
    run(b, SimConfig(seed=1, record_trace=False))
    assert a.snapshots == b.snapshots


def test_static_and_sequence_dirs_round_trip(tmp_path):
    g = expander_graph(10, seed=3)
    save_schedule_dir(StaticSchedule(g, initial_informed=(2,)), tmp_path / "st")
    loaded = load_schedule_dir(tmp_path / "st")
    assert loaded.graph_at(0) == g
    assert loaded.default_initial == (2,)

    seq = SequenceSchedule([g, cycle_graph(10)], repeat_last=True, initial_informed=(1,))
    save_schedule_dir(seq, tmp_path / "sq")
    loaded = load_schedule_dir(tmp_path / "sq")
    assert loaded.graph_at(0) == g
    assert loaded.graph_at(1) == cycle_graph(10)
    assert loaded.graph_at(5) == cycle_graph(10)


def test_adaptive_foreign_schedule_refuses_to_persist(tmp_path):
    sched = RecordingSchedule(dynamic_star_schedule(5))
    with pytest.raises(ValueError):
        save_schedule_dir(sched, tmp_path / "nope")
