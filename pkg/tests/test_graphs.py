"""Graph container, builders, schedules, and file round-trips."""

import numpy as np
import pytest

from dynrumor import graphs


def test_graph_from_edge_list_normalizes():
    g = graphs.graph_from_edge_list(4, [(1, 0), (2, 3), (0, 1)])
    assert g.n == 4
    assert g.m == 2
    assert g.adj[0] == (1,)
    assert g.adj[1] == (0,)
    assert set(g.edges()) == {(0, 1), (2, 3)}


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        graphs.graph_from_edge_list(3, [(0, 0)])
    with pytest.raises(ValueError):
        graphs.graph_from_edge_list(3, [(0, 3)])
    with pytest.raises(ValueError):
        graphs.graph_from_edge_list(0, [])


def test_complete_graph_degrees():
    g = graphs.complete_graph(5)
    assert g.m == 10
    assert all(g.degree(v) == 4 for v in range(5))
    assert g.vol() == 20


def test_path_cycle_star():
    p = graphs.path_graph(4)
    assert [p.degree(v) for v in range(4)] == [1, 2, 2, 1]
    c = graphs.cycle_graph(5)
    assert all(c.degree(v) == 2 for v in range(5))
    s = graphs.star_graph(6, center=2)
    assert s.degree(2) == 5
    assert sorted(s.degree(v) for v in range(6)) == [1, 1, 1, 1, 1, 5]
    with pytest.raises(ValueError):
        graphs.cycle_graph(2)


def test_csr_matches_adjacency():
    g = graphs.graph_from_edge_list(5, [(0, 1), (0, 4), (2, 3), (1, 4)])
    indptr, indices = g.csr()
    for v in range(5):
        assert tuple(indices[indptr[v] : indptr[v + 1]]) == g.adj[v]
    assert not indices.flags.writeable


def test_vol_of_subset():
    g = graphs.star_graph(5)
    assert g.vol([0]) == 4
    assert g.vol([1, 2]) == 2


def test_connectivity_and_components():
    g = graphs.graph_from_edge_list(5, [(0, 1), (2, 3)])
    assert not g.is_connected()
    assert g.component_of(0) == frozenset({0, 1})
    assert g.component_of(4) == frozenset({4})
    assert graphs.path_graph(5).is_connected()
    assert graphs.empty_graph(1).is_connected()


def test_graph_equality_and_hash():
    a = graphs.graph_from_edge_list(3, [(0, 1), (1, 2)])
    b = graphs.path_graph(3)
    assert a == b
    assert hash(a) == hash(b)
    assert a != graphs.cycle_graph(3)


def test_relabel_preserves_structure():
    g = graphs.star_graph(4, center=0)
    h = graphs.relabel(g, [3, 0, 1, 2])
    assert h.degree(3) == 3
    assert sorted(h.degree(v) for v in range(4)) == sorted(g.degree(v) for v in range(4))


def test_bfs_distances():
    g = graphs.path_graph(4)
    d = graphs.bfs_distances(g, 0)
    assert list(d) == [0, 1, 2, 3]
    g2 = graphs.graph_from_edge_list(3, [(0, 1)])
    d2 = graphs.bfs_distances(g2, 0)
    assert d2[2] < 0


def test_as_informed_mask_forms():
    m = graphs.as_informed_mask(4, [2, 0])
    assert list(m) == [1, 0, 1, 0]
    assert graphs.as_informed_mask(3, None).sum() == 0
    passthrough = np.array([0, 1, 0], dtype=np.uint8)
    assert graphs.as_informed_mask(3, passthrough) is passthrough
    with pytest.raises(ValueError):
        graphs.as_informed_mask(3, [3])


def test_static_schedule_repeats_graph():
    g = graphs.cycle_graph(4)
    s = graphs.StaticSchedule(g)
    assert s.n == 4
    assert not s.adaptive
    assert s.graph_at(0) is g
    assert s.graph_at(17) is g
    assert s.default_initial == (0,)


def test_sequence_schedule_repeats_last():
    gs = [graphs.path_graph(3), graphs.cycle_graph(3)]
    s = graphs.SequenceSchedule(gs)
    assert s.graph_at(0) == gs[0]
    assert s.graph_at(1) == gs[1]
    assert s.graph_at(5) == gs[1]
    strict = graphs.SequenceSchedule(gs, repeat_last=False)
    with pytest.raises(graphs.ScheduleQueryError):
        strict.graph_at(2)


def test_sequence_schedule_rejects_mixed_sizes():
    with pytest.raises(ValueError):
        graphs.SequenceSchedule([graphs.path_graph(3), graphs.path_graph(4)])


class _Toggle(graphs.AdaptiveSchedule):
    """Alternates between a path and a cycle; counts restarts."""

    def __init__(self):
        super().__init__(n=4)
        self.restarts = 0

    def _restart(self):
        self.restarts += 1

    def _advance(self, t, informed):
        return graphs.path_graph(4) if t % 2 == 0 else graphs.cycle_graph(4)


def test_adaptive_schedule_contract():
    s = _Toggle()
    assert s.adaptive
    g0 = s.graph_at(0, np.zeros(4, dtype=np.uint8))
    assert s.graph_at(0, np.zeros(4, dtype=np.uint8)) is g0  # cached re-query
    s.graph_at(1, np.zeros(4, dtype=np.uint8))
    with pytest.raises(graphs.ScheduleQueryError):
        s.graph_at(5, np.zeros(4, dtype=np.uint8))  # must be sequential
    s.reset()
    assert s.restarts == 1
    assert s.graph_at(0, np.zeros(4, dtype=np.uint8)) == graphs.path_graph(4)


def test_recording_schedule_snapshots():
    inner = graphs.SequenceSchedule([graphs.path_graph(3), graphs.cycle_graph(3)])
    rec = graphs.RecordingSchedule(inner)
    rec.graph_at(0)
    rec.graph_at(1)
    rec.graph_at(2)
    assert [g.m for g in rec.snapshots] == [2, 3, 3]


def test_graph_file_round_trip(tmp_path):
    g = graphs.graph_from_edge_list(6, [(0, 5), (1, 2), (3, 4), (2, 3)])
    path = tmp_path / "g.txt"
    graphs.write_graph_file(g, path, comment="round trip")
    h = graphs.read_graph_file(path)
    assert h == g


def test_graph_file_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 2\n0 1\n")  # claims 2 edges, has 1
    with pytest.raises(ValueError):
        graphs.read_graph_file(path)
