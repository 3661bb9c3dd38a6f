"""Graphs and dynamic-network schedules.

A :class:`Graph` is an immutable, loop-free, undirected graph over vertices
``0..n-1`` in canonical form (sorted adjacency lists), so structurally equal
graphs compare and hash equal.  A :class:`DynamicSchedule` is the oracle that
answers "which graph is live during [t, t+1)?" -- possibly as a function of
the informed set, which is how adaptive adversaries are modelled.
"""

from __future__ import annotations

import collections
from collections.abc import Iterable

import numpy as np


class Graph:
    """Immutable undirected graph in canonical adjacency form.

    Construct through :func:`graph_from_edge_list` or the small builders
    below; the constructor trusts its input to be canonical.
    """

    __slots__ = ("n", "adj", "m", "_indptr", "_indices", "_degrees", "_hash")

    def __init__(self, n: int, adj: tuple[tuple[int, ...], ...]):
        self.n = n
        self.adj = adj
        self.m = sum(len(a) for a in adj) // 2
        self._indptr = None
        self._indices = None
        self._degrees = None
        self._hash = None

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            self._degrees = np.array([len(a) for a in self.adj], dtype=np.int64)
            self._degrees.setflags(write=False)
        return self._degrees

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adj[u]

    def edges(self):
        """Iterate edges as (u, v) with u < v."""
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def vol(self, vertices: Iterable[int] | None = None) -> int:
        """Sum of degrees over ``vertices`` (all vertices if omitted)."""
        if vertices is None:
            return 2 * self.m
        return int(sum(len(self.adj[int(v)]) for v in vertices))

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in compressed sparse row form (indptr int64, indices int32)."""
        if self._indptr is None:
            degs = [len(a) for a in self.adj]
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(degs, out=indptr[1:])
            indices = np.fromiter(
                (v for nbrs in self.adj for v in nbrs), dtype=np.int32, count=2 * self.m
            )
            indptr.setflags(write=False)
            indices.setflags(write=False)
            self._indptr, self._indices = indptr, indices
        return self._indptr, self._indices

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        if self.m < self.n - 1:
            return False
        seen = bytearray(self.n)
        seen[0] = 1
        stack = [0]
        count = 1
        adj = self.adj
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    count += 1
                    stack.append(v)
        return count == self.n

    def component_of(self, u: int) -> frozenset[int]:
        """Vertex set of the connected component containing ``u``."""
        seen = {u}
        stack = [u]
        while stack:
            w = stack.pop()
            for v in self.adj[w]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return frozenset(seen)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def graph_from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a canonical :class:`Graph`; duplicate edges collapse.

    Rejects n < 1, self-loops and out-of-range endpoints.
    """
    if n < 1:
        raise ValueError(f"graph needs at least one vertex, got n={n}")
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        seen.add((u, v) if u < v else (v, u))
    lists: list[list[int]] = [[] for _ in range(n)]
    for u, v in seen:
        lists[u].append(v)
        lists[v].append(u)
    return Graph(n, tuple(tuple(sorted(a)) for a in lists))


def empty_graph(n: int) -> Graph:
    return graph_from_edge_list(n, [])


def complete_graph(n: int) -> Graph:
    return graph_from_edge_list(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return graph_from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return graph_from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(n: int, center: int = 0) -> Graph:
    if n < 2:
        raise ValueError("star needs n >= 2")
    return graph_from_edge_list(n, [(center, v) for v in range(n) if v != center])


def relabel(g: Graph, perm: Iterable[int]) -> Graph:
    """Apply the permutation ``perm`` (old id -> new id) to the vertices."""
    p = list(perm)
    return graph_from_edge_list(g.n, [(p[u], p[v]) for u, v in g.edges()])


def as_informed_mask(n: int, informed) -> np.ndarray:
    """Normalize an informed-set argument to a length-n uint8 indicator.

    Accepts None (nobody informed), an indicator array, or an iterable of
    vertex ids.  Indicator arrays pass through without copying; treat the
    result as read-only.
    """
    if informed is None:
        return np.zeros(n, dtype=np.uint8)
    if isinstance(informed, np.ndarray):
        if informed.shape != (n,):
            raise ValueError(f"indicator has shape {informed.shape}, expected ({n},)")
        if informed.dtype == np.uint8:
            return informed
        return informed.astype(np.uint8)
    mask = np.zeros(n, dtype=np.uint8)
    for v in informed:
        v = int(v)
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} outside 0..{n - 1}")
        mask[v] = 1
    return mask


# ---------------------------------------------------------------------------
# Schedules


class ScheduleQueryError(ValueError):
    """Raised when an adaptive schedule is queried out of order."""


class DynamicSchedule:
    """Oracle mapping step t (and the informed set) to the live graph.

    ``graph_at(t, informed)`` returns the graph exposed during [t, t+1).
    Non-adaptive schedules ignore ``informed`` and answer any t; adaptive
    ones must be queried sequentially t = 0, 1, 2, ... (repeating the
    current t is allowed) and are rewound with :meth:`reset`.
    """

    adaptive = False

    def __init__(self, n: int, seed: int = 0, initial_informed=None):
        self.n = n
        self.seed = seed
        self._default_initial = (
            (0,) if initial_informed is None else tuple(sorted(int(v) for v in initial_informed))
        )

    def graph_at(self, t: int, informed=None) -> Graph:
        raise NotImplementedError

    def reset(self) -> None:
        pass

    def clone(self, seed: int | None = None) -> "DynamicSchedule":
        raise NotImplementedError

    @property
    def default_initial(self) -> tuple[int, ...]:
        """Where the rumor starts when a run doesn't say otherwise."""
        return self._default_initial


def _check_step(t) -> int:
    t = int(t)
    if t < 0:
        raise ValueError(f"schedule step must be >= 0, got {t}")
    return t


class StaticSchedule(DynamicSchedule):
    """The same graph at every step."""

    def __init__(self, graph: Graph, initial_informed=None):
        super().__init__(graph.n, seed=0, initial_informed=initial_informed)
        self.graph = graph

    def graph_at(self, t: int, informed=None) -> Graph:
        _check_step(t)
        return self.graph

    def clone(self, seed: int | None = None) -> "StaticSchedule":
        return StaticSchedule(self.graph, initial_informed=self._default_initial)


class SequenceSchedule(DynamicSchedule):
    """A fixed list of graphs; past the end the last one repeats."""

    def __init__(self, graphs: list[Graph], repeat_last: bool = True, initial_informed=None):
        if not graphs:
            raise ValueError("sequence schedule needs at least one graph")
        n = graphs[0].n
        for g in graphs:
            if g.n != n:
                raise ValueError("all graphs in a sequence must share n")
        super().__init__(n, seed=0, initial_informed=initial_informed)
        self.graphs = list(graphs)
        self.repeat_last = repeat_last

    def graph_at(self, t: int, informed=None) -> Graph:
        t = _check_step(t)
        if t < len(self.graphs):
            return self.graphs[t]
        if self.repeat_last:
            return self.graphs[-1]
        raise ScheduleQueryError(
            f"step {t} beyond the {len(self.graphs)}-graph sequence (repeat_last=False)"
        )

    def clone(self, seed: int | None = None) -> "SequenceSchedule":
        return SequenceSchedule(
            self.graphs, self.repeat_last, initial_informed=self._default_initial
        )


class AdaptiveSchedule(DynamicSchedule):
    """Base for schedules that react to the informed set.

    Subclasses implement ``_advance(t, mask) -> Graph`` (called once per
    step, strictly in order) and ``_restart()`` to rewind family state.
    """

    adaptive = True

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n, seed)
        self._t: int | None = None
        self._g: Graph | None = None

    def graph_at(self, t: int, informed=None) -> Graph:
        t = _check_step(t)
        if t == self._t:
            return self._g
        expected = 0 if self._t is None else self._t + 1
        if t != expected:
            raise ScheduleQueryError(
                f"adaptive schedule queried at step {t}, expected {expected} "
                "(query sequentially or reset() first)"
            )
        mask = as_informed_mask(self.n, informed)
        self._g = self._advance(t, mask)
        self._t = t
        return self._g

    def reset(self) -> None:
        self._t = None
        self._g = None
        self._restart()

    def _advance(self, t: int, mask: np.ndarray) -> Graph:
        raise NotImplementedError

    def _restart(self) -> None:
        pass


class RecordingSchedule(DynamicSchedule):
    """Wrapper that records the realized snapshot of every step it serves."""

    def __init__(self, inner: DynamicSchedule):
        super().__init__(inner.n, inner.seed)
        self.inner = inner
        self.adaptive = inner.adaptive
        self.snapshots: list[Graph] = []

    def graph_at(self, t: int, informed=None) -> Graph:
        g = self.inner.graph_at(t, informed)
        t = int(t)
        if t == len(self.snapshots):
            self.snapshots.append(g)
        elif t < len(self.snapshots):
            self.snapshots[t] = g
        else:
            raise ScheduleQueryError(
                f"recording wrapper queried at step {t} with only "
                f"{len(self.snapshots)} steps recorded"
            )
        return g

    def reset(self) -> None:
        self.snapshots = []
        self.inner.reset()

    def clone(self, seed: int | None = None) -> "RecordingSchedule":
        return RecordingSchedule(self.inner.clone(seed))

    @property
    def default_initial(self) -> tuple[int, ...]:
        return self.inner.default_initial


# ---------------------------------------------------------------------------
# Graph files


def write_graph_file(g: Graph, path, comment: str | None = None) -> None:
    """Write ``n m`` header plus one ``u v`` line per edge."""
    with open(path, "w") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def read_graph_file(path) -> Graph:
    """Parse the ``n m`` / ``u v`` format; '#' starts a comment."""
    header = None
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two integers, got {line!r}")
            a, b = int(parts[0]), int(parts[1])
            if header is None:
                header = (a, b)
            else:
                edges.append((a, b))
    if header is None:
        raise ValueError(f"{path}: no header line")
    n, m = header
    if len(edges) != m:
        raise ValueError(f"{path}: header says {m} edges, file has {len(edges)}")
    g = graph_from_edge_list(n, edges)
    if g.m != m:
        raise ValueError(f"{path}: duplicate edges (header {m}, canonical {g.m})")
    return g


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Hop distances from ``source`` (-1 for unreachable vertices)."""
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    queue = collections.deque([source])
    while queue:
        u = queue.popleft()
        for v in g.adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist
