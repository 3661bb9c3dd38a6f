"""Compiled core vs pure-Python fallback: bit-identical behavior.

Every public kernel must produce exactly the same numbers from either
implementation, so a run is reproducible regardless of which core loaded.
"""

import random

import numpy as np
import pytest

from dynrumor import _kernels, graphs
from dynrumor._kernels import get_kernels

pytestmark = pytest.mark.skipif(
    not _kernels.HAVE_COMPILED, reason="compiled core not built"
)

PY = get_kernels("python")
C = get_kernels("compiled") if _kernels.HAVE_COMPILED else None


def random_graph(rng, n, p=0.4):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return graphs.graph_from_edge_list(n, edges)


def test_rng_kernel_agrees():
    rng = random.Random(1)
    for _ in range(200):
        seed = rng.getrandbits(64)
        stream = rng.randint(1, 6)
        a = rng.getrandbits(32)
        b = rng.getrandbits(32)
        assert PY.rng_u64(seed, stream, a, b) == C.rng_u64(seed, stream, a, b)


def test_scans_agree_on_random_graphs():
    rng = random.Random(17)
    for _ in range(150):
        n = rng.randint(1, 9)
        g = random_graph(rng, n)
        indptr, indices = g.csr()
        assert PY.conductance_scan(indptr, indices, n) == C.conductance_scan(
            indptr, indices, n
        )
        assert PY.diligence_scan(indptr, indices, n) == C.diligence_scan(
            indptr, indices, n
        )


def _drive(kern, g, seed, protocol, layer=None, k_limit=0, stop_mode=0, horizon=None):
    """Minimal segment loop mirroring the simulator driver."""
    from dynrumor import _rng

    n = g.n
    rate = 1.0 if protocol == 0 else 2.0
    informed = np.zeros(n, dtype=np.uint8)
    informed[0] = 1
    if protocol == 2:
        informed[:] = 0
        informed[layer == 0] = 1
    count = int(informed.sum())
    verts = np.arange(n, dtype=np.int64)
    next_time = -np.log(_rng.keyed_uniform_vec(seed, _rng.TICK, verts, 0)) / rate
    layer_arr = (
        np.zeros(0, dtype=np.int32) if layer is None else layer.astype(np.int32)
    )
    if protocol == 2:
        next_time[layer_arr >= k_limit] = np.inf
    tick_seq = np.zeros(n, dtype=np.int64)
    cap = 1 << 14
    tr = (
        np.empty(cap, dtype=np.float64),
        np.empty(cap, dtype=np.int32),
        np.empty(cap, dtype=np.int32),
        np.empty(cap, dtype=np.uint8),
    )
    tr_len = 0
    horizon = float(10 * n if horizon is None else horizon)
    indptr, indices = g.csr()
    t = 0
    status = kern.STATUS_SEGMENT_DONE
    stop = None
    while t < horizon:
        status, count, stop_time, tr_len = kern.async_segment(
            indptr,
            indices,
            layer_arr,
            k_limit,
            informed,
            count,
            next_time,
            tick_seq,
            min(float(t + 1), horizon),
            seed,
            protocol,
            stop_mode,
            1,
            *tr,
            tr_len,
        )
        assert status != kern.STATUS_TRACE_FULL
        if status == kern.STATUS_STOPPED:
            stop = stop_time
            break
        t += 1
    return (
        informed.copy(),
        count,
        stop,
        tr[0][:tr_len].copy(),
        tr[1][:tr_len].copy(),
        tr[2][:tr_len].copy(),
        tr[3][:tr_len].copy(),
    )


def test_async_segment_traces_identical():
    rng = random.Random(23)
    for trial in range(40):
        n = rng.randint(2, 10)
        g = random_graph(rng, n, p=0.5)
        seed = rng.getrandbits(64)
        for protocol in (0, 1):
            out_py = _drive(PY, g, seed, protocol)
            out_c = _drive(C, g, seed, protocol)
            for a, b in zip(out_py, out_c):
                if isinstance(a, np.ndarray):
                    assert np.array_equal(a, b)
                else:
                    assert a == b


def test_forward_segment_traces_identical():
    # two stacked bipartite layers
    edges = []
    layer = np.zeros(9, dtype=np.int32)
    for i in range(3):
        layer[3 + i] = 1
        layer[6 + i] = 2
        for j in range(3):
            edges.append((i, 3 + j))
            edges.append((3 + i, 6 + j))
    g = graphs.graph_from_edge_list(9, edges)
    for seed in (5, 99, 123456):
        out_py = _drive(PY, g, seed, 2, layer=layer, k_limit=2)
        out_c = _drive(C, g, seed, 2, layer=layer, k_limit=2)
        for a, b in zip(out_py, out_c):
            if isinstance(a, np.ndarray):
                assert np.array_equal(a, b)
            else:
                assert a == b


def test_stop_mode_first_transfer_identical():
    rng = random.Random(31)
    for _ in range(25):
        n = rng.randint(2, 8)
        g = random_graph(rng, n, p=0.6)
        seed = rng.getrandbits(64)
        out_py = _drive(PY, g, seed, 0, stop_mode=1)
        out_c = _drive(C, g, seed, 0, stop_mode=1)
        assert out_py[2] == out_c[2]


def test_scan_rejects_oversized_graphs():
    g = graphs.cycle_graph(_kernels.MAX_SCAN_VERTICES + 1)
    indptr, indices = g.csr()
    with pytest.raises(ValueError):
        PY.conductance_scan(indptr, indices, g.n)
    with pytest.raises(ValueError):
        C.conductance_scan(indptr, indices, g.n)


def test_get_kernels_selects():
    assert get_kernels("python").IMPLEMENTATION == "python"
    assert get_kernels("auto").IMPLEMENTATION in ("python", "compiled")
    with pytest.raises(ValueError):
        get_kernels("fortran")
