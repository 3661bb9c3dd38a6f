"""Benchmark graph families and the adversarial dynamic schedules.

The slow families share one blueprint: a "string" of k+1 stacked complete
bipartite layers of width delta forms a bottleneck that the rumor must
climb layer by layer, while expander blocks on both ends keep the graph
connected and the metrics well behaved.  The adaptive schedules rebuild
that blueprint as the rumor advances, always moving the bottleneck just
beyond the informed frontier.  Two small families (the two-clique switch
and the leaf-chasing star) exhibit the synchronous/asynchronous dichotomy.

All randomness is derived from the schedule seed, so rebuilding a schedule
with the same parameters reproduces the same graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dynrumor import _rng
from dynrumor.graphs import (
    AdaptiveSchedule,
    DynamicSchedule,
    Graph,
    SequenceSchedule,
    StaticSchedule,
    complete_graph,
    cycle_graph,
    graph_from_edge_list,
    path_graph,
    relabel,
    star_graph,
)

_MASK = (1 << 64) - 1


def _child_seed(seed: int, a: int = 0, b: int = 0) -> int:
    return _rng.derive_seed(seed, _rng.SCHEDULE, a, b)


# ---------------------------------------------------------------------------
# Regular and near-regular builders


def _circulant_regular(n: int, d: int) -> list[tuple[int, int]]:
    """Edge list of a connected d-regular circulant (odd d needs even n)."""
    edges = []
    for off in range(1, d // 2 + 1):
        for v in range(n):
            u = (v + off) % n
            edges.append((min(v, u), max(v, u)))
    if d % 2:
        edges.extend((v, v + n // 2) for v in range(n // 2))
    return edges


def random_regular_connected(n: int, d: int, seed: int, max_rounds: int = 40) -> Graph:
    """Seeded connected simple d-regular graph.

    Starts from a circulant and mixes with random double-edge swaps that
    preserve degrees and simplicity, then keeps the result only if it is
    still connected (one extra mixing round otherwise).  Not exactly uniform,
    but well scrambled and fully determined by the seed.
    """
    if n < 1 or d < 0 or d >= n:
        raise ValueError(f"need 0 <= d < n, got n={n}, d={d}")
    if (n * d) % 2 != 0:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    if d == 0:
        if n != 1:
            raise ValueError("a 0-regular graph on n > 1 vertices is disconnected")
        return graph_from_edge_list(1, [])
    if d == 1:
        if n != 2:
            raise ValueError("a connected 1-regular graph needs exactly 2 vertices")
        return path_graph(2)
    if d == 2:
        return cycle_graph(n)
    if d == n - 1:
        return complete_graph(n)
    rng = np.random.default_rng(seed & _MASK)
    edges = _circulant_regular(n, d)
    present = set(edges)
    m = len(edges)
    for _ in range(max_rounds):
        picks = rng.integers(0, m, size=2 * 10 * m)
        coins = rng.integers(0, 2, size=10 * m)
        for j in range(10 * m):
            i1, i2 = int(picks[2 * j]), int(picks[2 * j + 1])
            if i1 == i2:
                continue
            a, b = edges[i1]
            c, e = edges[i2]
            if coins[j]:
                c, e = e, c
            # rewire {a,b},{c,e} -> {a,c},{b,e} when that keeps the graph simple
            if a == c or a == e or b == c or b == e:
                continue
            new1 = (min(a, c), max(a, c))
            new2 = (min(b, e), max(b, e))
            if new1 in present or new2 in present:
                continue
            present.discard((a, b))
            present.discard((c, e))
            present.add(new1)
            present.add(new2)
            edges[i1] = new1
            edges[i2] = new2
        g = graph_from_edge_list(n, edges)
        if g.is_connected():
            return g
    raise RuntimeError(
        f"edge-swap mixing failed to reach a connected {d}-regular graph on "
        f"{n} vertices in {max_rounds} rounds"
    )


def near_regular_graph(
    n: int, d_base: int, d_special: int, seed: int, special: int = 0
) -> Graph:
    """Connected simple graph where every vertex has degree ``d_base``
    except ``special``, which has degree ``d_special`` (both even).

    Built from a d_base-regular graph by edge swaps that only change the
    special vertex's degree and provably preserve connectivity: raising it
    replaces an edge {x, y} by {s, x}, {s, y}; lowering it does the reverse.
    """
    if not 0 <= special < n:
        raise ValueError(f"special vertex {special} outside 0..{n - 1}")
    if d_base % 2 or d_special % 2:
        raise ValueError("both degrees must be even for such graphs to exist")
    if not (0 < d_special <= n - 1 and 0 < d_base <= n - 1):
        raise ValueError(f"degrees must lie in 1..{n - 1}")
    if d_special == d_base:
        return random_regular_connected(n, d_base, seed)
    steps = abs(d_special - d_base) // 2
    raise_degree = d_special > d_base
    for attempt in range(50):
        base = random_regular_connected(n, d_base, _child_seed(seed, attempt, 1))
        rng = np.random.default_rng(_child_seed(seed, attempt, 2) & _MASK)
        adj = {u: set(base.adj[u]) for u in range(n)}
        ok = True
        for _ in range(steps):
            if raise_degree:
                blocked = adj[special] | {special}
                cands = [
                    (u, v)
                    for u in range(n)
                    if u not in blocked
                    for v in adj[u]
                    if u < v and v not in blocked
                ]
                if not cands:
                    ok = False
                    break
                x, y = cands[rng.integers(len(cands))]
                adj[x].discard(y)
                adj[y].discard(x)
                adj[special].update((x, y))
                adj[x].add(special)
                adj[y].add(special)
            else:
                nbrs = sorted(adj[special])
                cands = [
                    (x, y)
                    for i, x in enumerate(nbrs)
                    for y in nbrs[i + 1 :]
                    if y not in adj[x]
                ]
                if not cands:
                    ok = False
                    break
                x, y = cands[rng.integers(len(cands))]
                adj[special].difference_update((x, y))
                adj[x].discard(special)
                adj[y].discard(special)
                adj[x].add(y)
                adj[y].add(x)
        if not ok:
            continue
        edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
        g = graph_from_edge_list(n, edges)
        if g.is_connected():
            return g
    raise RuntimeError(
        f"failed to build a ({d_base}, {d_special})-near-regular graph on "
        f"{n} vertices after 50 attempts"
    )


_EXPANDER_CHECK_MAX = 20
_EXPANDER_MIN_PHI = 0.1


def expander_graph(n: int, seed: int) -> Graph:
    """Connected 4-regular random graph (an expander with high probability).

    Small instances are spot-checked for conductance >= 0.1 and resampled
    if the check fails; larger ones rely on the high-probability guarantee.
    """
    if n < 5:
        raise ValueError(f"a 4-regular graph needs n >= 5, got {n}")
    if n > _EXPANDER_CHECK_MAX:
        return random_regular_connected(n, 4, seed)
    from dynrumor import metrics  # local import: metrics depends on graphs only

    best = None
    for attempt in range(50):
        g = random_regular_connected(n, 4, _child_seed(seed, attempt, 3))
        phi, _ = metrics.conductance_exact(g, cap=_EXPANDER_CHECK_MAX)
        if best is None or phi > best[0]:
            best = (phi, g)
        if phi >= _EXPANDER_MIN_PHI:
            return g
    return best[1]


# ---------------------------------------------------------------------------
# Layered bipartite strings


@dataclass(frozen=True)
class LayeredString:
    """Layer labelling of a graph: ``layer_of[v]`` in 0..k, or -1 for
    vertices outside the string."""

    layer_of: np.ndarray
    k: int

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.layer_of, dtype=np.int32))
        arr.setflags(write=False)
        object.__setattr__(self, "layer_of", arr)
        if self.k < 1:
            raise ValueError("a string needs at least two layers")
        if int(arr.max(initial=-1)) != self.k:
            raise ValueError("layer labels must reach k")

    def layer(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.flatnonzero(self.layer_of == i))

    @property
    def first_layer(self) -> tuple[int, ...]:
        return self.layer(0)

    @property
    def last_layer(self) -> tuple[int, ...]:
        return self.layer(self.k)


def bipartite_string(k: int, delta: int) -> tuple[Graph, LayeredString]:
    """String of k+1 layers of ``delta`` vertices, consecutive layers
    completely joined: (k+1)*delta vertices, k*delta^2 edges."""
    if k < 1 or delta < 1:
        raise ValueError(f"need k >= 1 and delta >= 1, got k={k}, delta={delta}")
    n = (k + 1) * delta
    layer_of = np.repeat(np.arange(k + 1, dtype=np.int32), delta)
    edges = []
    for i in range(k):
        lo = i * delta
        for u in range(lo, lo + delta):
            for v in range(lo + delta, lo + 2 * delta):
                edges.append((u, v))
    return graph_from_edge_list(n, edges), LayeredString(layer_of, k)


# ---------------------------------------------------------------------------
# Bottleneck graphs (string + expander ends)


@dataclass(frozen=True)
class BottleneckLayout:
    """Vertex roles inside a bottleneck graph."""

    n: int
    k: int
    delta: int
    a_side: tuple[int, ...]
    b_side: tuple[int, ...]
    string: LayeredString

    @property
    def s0(self) -> tuple[int, ...]:
        return self.string.first_layer

    @property
    def sk(self) -> tuple[int, ...]:
        return self.string.last_layer


def _bottleneck_on(
    n: int, a_ids: np.ndarray, b_ids: np.ndarray, k: int, delta: int, seed: int
) -> tuple[Graph, BottleneckLayout]:
    """Bottleneck graph over explicit sides: the first ``delta`` vertices of
    ``a_ids`` form layer 0, the first ``k * delta`` of ``b_ids`` form layers
    1..k, and 4-regular expanders fill both remainders; layer 0 and layer k
    are each attached to ``delta`` distinct expander vertices, spread so no
    expander vertex gains more than O(1) edges."""
    a_ids = np.sort(np.asarray(a_ids, dtype=np.int64))
    b_ids = np.sort(np.asarray(b_ids, dtype=np.int64))
    need = max(5, delta)
    if len(a_ids) < delta + need:
        raise ValueError(
            f"side A has {len(a_ids)} vertices; needs >= delta + max(5, delta) "
            f"= {delta + need}"
        )
    if len(b_ids) < k * delta + need:
        raise ValueError(
            f"side B has {len(b_ids)} vertices; needs >= k*delta + max(5, delta) "
            f"= {k * delta + need}"
        )
    layers = [a_ids[:delta]] + [
        b_ids[i * delta : (i + 1) * delta] for i in range(k)
    ]
    a_exp = a_ids[delta:]
    b_exp = b_ids[k * delta :]
    edges: list[tuple[int, int]] = []
    for low, high in zip(layers, layers[1:]):
        for u in low:
            for v in high:
                edges.append((int(u), int(v)))
    g1 = expander_graph(len(a_exp), _child_seed(seed, 1))
    edges.extend((int(a_exp[u]), int(a_exp[v])) for u, v in g1.edges())
    g2 = expander_graph(len(b_exp), _child_seed(seed, 2))
    edges.extend((int(b_exp[u]), int(b_exp[v])) for u, v in g2.edges())
    for pos, u in enumerate(layers[0]):
        for j in range(delta):
            edges.append((int(u), int(a_exp[(pos * delta + j) % len(a_exp)])))
    for pos, u in enumerate(layers[-1]):
        for j in range(delta):
            edges.append((int(u), int(b_exp[(pos * delta + j) % len(b_exp)])))
    layer_of = np.full(n, -1, dtype=np.int32)
    for i, layer in enumerate(layers):
        layer_of[layer] = i
    graph = graph_from_edge_list(n, edges)
    layout = BottleneckLayout(
        n=n,
        k=k,
        delta=delta,
        a_side=tuple(int(v) for v in a_ids),
        b_side=tuple(int(v) for v in b_ids),
        string=LayeredString(layer_of, k),
    )
    return graph, layout


def bottleneck_graph(
    n: int, k: int, delta: int, seed: int, a_size: int | None = None
) -> tuple[Graph, BottleneckLayout]:
    """Standalone bottleneck graph: side A = vertices 0..a_size-1 (default
    max(n//4, delta + max(5, delta))), side B the rest."""
    if k < 1 or delta < 1:
        raise ValueError(f"need k >= 1 and delta >= 1, got k={k}, delta={delta}")
    if a_size is None:
        a_size = max(n // 4, delta + max(5, delta))
    if not 0 < a_size < n:
        raise ValueError(f"a_size={a_size} outside 1..{n - 1}")
    return _bottleneck_on(
        n,
        np.arange(a_size, dtype=np.int64),
        np.arange(a_size, n, dtype=np.int64),
        k,
        delta,
        seed,
    )


def default_layer_count(n: int) -> int:
    """ln n / ln ln n, rounded up -- the depth at which the per-step
    bottleneck crossing probability drops polynomially."""
    if n < 3:
        return 1
    return max(1, math.ceil(math.log(n) / max(math.log(math.log(n)), 1.0)))


# ---------------------------------------------------------------------------
# Adaptive lower-bound schedules


class DiligenceLBSchedule(AdaptiveSchedule):
    """Evolving bottleneck keyed to diligence ~ 1/delta.

    Starts as a bottleneck graph with side A = n//4 vertices; after each
    step the vertices informed so far move to side A and the string plus
    expanders are rebuilt just beyond them, while side B stays at least
    n/4 strong.  Once side B would drop below n/4 (or too small to carry
    the string), the last graph freezes.  The rumor starts on A's expander.
    """

    family = "diligence-lb"

    def __init__(self, n: int, rho: float, k: int | None = None, seed: int = 0):
        if not 0 < rho <= 1:
            raise ValueError(f"need 0 < rho <= 1, got {rho}")
        delta = math.ceil(1.0 / rho)
        if k is None:
            k = default_layer_count(n)
        if k < 1:
            raise ValueError(f"need k >= 1, got {k}")
        a_size = n // 4
        need = max(5, delta)
        if a_size < delta + need or (n - a_size) < k * delta + need:
            raise ValueError(
                f"n={n} too small for rho={rho} (delta={delta}), k={k}: "
                f"needs n//4 >= {delta + need} and n - n//4 >= {k * delta + need}"
            )
        super().__init__(n, seed)
        self.rho = rho
        self.delta = delta
        self.k = k
        self.a_size = a_size
        self._default_initial = (delta,)  # first vertex of A's expander
        self._restart()

    def params(self) -> dict:
        return {"n": self.n, "rho": self.rho, "k": self.k, "seed": self.seed}

    def clone(self, seed: int | None = None) -> "DiligenceLBSchedule":
        return DiligenceLBSchedule(
            self.n, self.rho, self.k, self.seed if seed is None else seed
        )

    def _restart(self) -> None:
        self._in_b = np.zeros(self.n, dtype=bool)
        self._in_b[self.a_size :] = True
        self._frozen = False
        self._graph: Graph | None = None
        self.layout: BottleneckLayout | None = None

    def _build(self, t: int) -> None:
        b_ids = np.flatnonzero(self._in_b)
        a_ids = np.flatnonzero(~self._in_b)
        self._graph, self.layout = _bottleneck_on(
            self.n, a_ids, b_ids, self.k, self.delta, _child_seed(self.seed, t)
        )

    def _advance(self, t: int, mask: np.ndarray) -> Graph:
        if self._graph is None:
            self._build(t)
            return self._graph
        if self._frozen:
            return self._graph
        new_b = self._in_b & ~mask.astype(bool)
        nb = int(new_b.sum())
        if 4 * nb < self.n or nb < self.k * self.delta + max(5, self.delta):
            self._frozen = True
            return self._graph
        if nb < int(self._in_b.sum()):
            self._in_b = new_b
            self._build(t)
        return self._graph


class AbsoluteLBSchedule(AdaptiveSchedule):
    """Evolving pair of blocks joined by a single bridge, keyed to absolute
    diligence 1/(delta+1).

    Side A (initially n//2 vertices) is 4-regular except one even-degree-
    delta hub; side B is delta-regular; the hub is bridged to B's lowest
    vertex, so every crossing must use that one slow edge.  Informed
    vertices migrate to side A each step and both blocks are rebuilt until
    side B would drop below n/6, when the graph freezes.  delta is the
    even member of {ceil(1/rho), ceil(1/rho)+1}.
    """

    family = "absolute-lb"

    def __init__(self, n: int, rho: float, seed: int = 0):
        if not 0 < rho <= 1:
            raise ValueError(f"need 0 < rho <= 1, got {rho}")
        delta = math.ceil(1.0 / rho)
        if delta % 2:
            delta += 1
        a_size = n // 2
        if a_size < max(6, delta + 2) or (n - a_size) < delta + 1:
            raise ValueError(
                f"n={n} too small for rho={rho} (delta={delta}): needs "
                f"n//2 >= {max(6, delta + 2)} and n - n//2 >= {delta + 1}"
            )
        if math.ceil(n / 6) < delta + 1:
            raise ValueError(
                f"n={n} too small: the frozen side B (>= n/6) cannot carry a "
                f"{delta}-regular graph"
            )
        super().__init__(n, seed)
        self.rho = rho
        self.delta = delta
        self.a_size = a_size
        self._default_initial = (1,)  # a plain degree-4 vertex of side A
        self._restart()

    def params(self) -> dict:
        return {"n": self.n, "rho": self.rho, "seed": self.seed}

    def clone(self, seed: int | None = None) -> "AbsoluteLBSchedule":
        return AbsoluteLBSchedule(self.n, self.rho, self.seed if seed is None else seed)

    def _restart(self) -> None:
        self._in_b = np.zeros(self.n, dtype=bool)
        self._in_b[self.a_size :] = True
        self._frozen = False
        self._graph: Graph | None = None
        self.bridge: tuple[int, int] | None = None

    def _build(self, t: int) -> None:
        b_ids = np.flatnonzero(self._in_b)
        a_ids = np.flatnonzero(~self._in_b)
        ga = near_regular_graph(
            len(a_ids), 4, self.delta, _child_seed(self.seed, t, 1), special=0
        )
        edges = [(int(a_ids[u]), int(a_ids[v])) for u, v in ga.edges()]
        if self.delta == 2:
            gb = cycle_graph(len(b_ids)) if len(b_ids) >= 3 else path_graph(len(b_ids))
        else:
            gb = random_regular_connected(
                len(b_ids), self.delta, _child_seed(self.seed, t, 2)
            )
        edges.extend((int(b_ids[u]), int(b_ids[v])) for u, v in gb.edges())
        hub = int(a_ids[0])
        target = int(b_ids[0])
        edges.append((hub, target))
        self.bridge = (hub, target)
        self._graph = graph_from_edge_list(self.n, edges)

    def _advance(self, t: int, mask: np.ndarray) -> Graph:
        if self._graph is None:
            self._build(t)
            return self._graph
        if self._frozen:
            return self._graph
        new_b = self._in_b & ~mask.astype(bool)
        nb = int(new_b.sum())
        if 6 * nb < self.n or nb < self.delta + 1:
            self._frozen = True
            return self._graph
        if nb < int(self._in_b.sum()):
            self._in_b = new_b
            self._build(t)
        return self._graph


class DynamicStarSchedule(AdaptiveSchedule):
    """Star on n+1 vertices whose center is always the lowest uninformed
    vertex (any vertex once everyone knows the rumor).

    Synchronous push-pull needs exactly n rounds on it -- each round
    informs only the freshly chosen center -- while asynchronous push-pull
    finishes in logarithmic time.  The rumor starts at a leaf.
    """

    family = "dynamic-star"

    def __init__(self, n: int, seed: int = 0):
        if n < 2:
            raise ValueError(f"need n >= 2, got {n}")
        super().__init__(n + 1, seed)
        self.size_parameter = n
        self._default_initial = (1,)

    def params(self) -> dict:
        return {"n": self.size_parameter, "seed": self.seed}

    def clone(self, seed: int | None = None) -> "DynamicStarSchedule":
        return DynamicStarSchedule(
            self.size_parameter, self.seed if seed is None else seed
        )

    def _restart(self) -> None:
        pass

    def _advance(self, t: int, mask: np.ndarray) -> Graph:
        uninformed = np.flatnonzero(mask == 0)
        center = int(uninformed[0]) if len(uninformed) else 0
        return star_graph(self.n, center=center)


class TwoCliqueSchedule(SequenceSchedule):
    """One clique with a pendant vertex, then forever two bridged cliques.

    Vertices 0..n-1 start as a clique with vertex n pendant on vertex 0 and
    the rumor at vertex n.  From step 1 on, the graph is two cliques (the
    lower one containing 0, the upper one containing n) joined only by the
    edge {0, n}.  Asynchronously the bridge is an O(1/n)-rate chokepoint,
    so spreading takes linear time; synchronously the pendant pushes across
    in round 0 and both cliques fill in logarithmic rounds.
    """

    family = "two-clique"

    def __init__(self, n: int, seed: int = 0):
        if n < 3:
            raise ValueError(f"need n >= 3, got {n}")
        total = n + 1
        first = [(u, v) for u in range(n) for v in range(u + 1, n)]
        first.append((0, n))
        half = total // 2
        low = list(range(half))
        high = list(range(half, total))
        second = [(u, v) for i, u in enumerate(low) for v in low[i + 1 :]]
        second.extend((u, v) for i, u in enumerate(high) for v in high[i + 1 :])
        second.append((0, n))
        super().__init__(
            [graph_from_edge_list(total, first), graph_from_edge_list(total, second)],
            repeat_last=True,
            initial_informed=(n,),
        )
        self.size_parameter = n
        self.seed = seed

    def params(self) -> dict:
        return {"n": self.size_parameter, "seed": self.seed}

    def clone(self, seed: int | None = None) -> "TwoCliqueSchedule":
        return TwoCliqueSchedule(self.size_parameter, self.seed if seed is None else seed)


def diligence_lb_schedule(
    n: int, rho: float, k: int | None = None, seed: int = 0
) -> DiligenceLBSchedule:
    return DiligenceLBSchedule(n, rho, k, seed)


def absolute_lb_schedule(n: int, rho: float, seed: int = 0) -> AbsoluteLBSchedule:
    return AbsoluteLBSchedule(n, rho, seed)


def dynamic_star_schedule(n: int, seed: int = 0) -> DynamicStarSchedule:
    return DynamicStarSchedule(n, seed)


def two_clique_schedule(n: int, seed: int = 0) -> TwoCliqueSchedule:
    return TwoCliqueSchedule(n, seed)


#: name -> factory taking the family's params() dict
FAMILIES = {
    "diligence-lb": lambda n, rho, k=None, seed=0: DiligenceLBSchedule(n, rho, k, seed),
    "absolute-lb": lambda n, rho, seed=0: AbsoluteLBSchedule(n, rho, seed),
    "dynamic-star": lambda n, seed=0: DynamicStarSchedule(n, seed),
    "two-clique": lambda n, seed=0: TwoCliqueSchedule(n, seed),
}


# ---------------------------------------------------------------------------
# Schedule directories (manifest.json + graph files)


def save_schedule_dir(schedule: DynamicSchedule, dirpath) -> None:
    """Persist a schedule as a directory: ``manifest.json`` plus one graph
    file per stored snapshot.  Family schedules save their parameters and
    are rebuilt exactly on load; plain static/sequence schedules save their
    graphs.  Foreign adaptive schedules cannot be persisted."""
    import json
    from pathlib import Path

    from dynrumor.graphs import write_graph_file

    dirpath = Path(dirpath)
    dirpath.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "format": 1,
        "n": schedule.n,
        "initial_informed": list(schedule.default_initial),
    }
    family = getattr(schedule, "family", None)
    if family is not None:
        manifest["kind"] = "family"
        manifest["family"] = family
        manifest["params"] = schedule.params()
    elif isinstance(schedule, StaticSchedule):
        manifest["kind"] = "static"
        manifest["graphs"] = ["graph_000000.txt"]
        write_graph_file(schedule.graph, dirpath / "graph_000000.txt")
    elif isinstance(schedule, SequenceSchedule):
        manifest["kind"] = "sequence"
        manifest["repeat_last"] = schedule.repeat_last
        names = [f"graph_{i:06d}.txt" for i in range(len(schedule.graphs))]
        manifest["graphs"] = names
        for name, g in zip(names, schedule.graphs):
            write_graph_file(g, dirpath / name)
    else:
        raise ValueError(
            f"cannot persist a {type(schedule).__name__}: only family, static "
            "and sequence schedules have a file form"
        )
    with open(dirpath / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_schedule_dir(dirpath) -> DynamicSchedule:
    """Inverse of :func:`save_schedule_dir`."""
    import json
    from pathlib import Path

    from dynrumor.graphs import read_graph_file

    dirpath = Path(dirpath)
    with open(dirpath / "manifest.json") as fh:
        manifest = json.load(fh)
    kind = manifest.get("kind")
    initial = manifest.get("initial_informed")
    if kind == "family":
        family = manifest["family"]
        if family not in FAMILIES:
            raise ValueError(f"unknown schedule family {family!r}")
        schedule = FAMILIES[family](**manifest["params"])
        if schedule.n != manifest["n"]:
            raise ValueError(
                f"manifest says n={manifest['n']} but family rebuilt n={schedule.n}"
            )
        return schedule
    graphs_ = [read_graph_file(dirpath / name) for name in manifest["graphs"]]
    if kind == "static":
        return StaticSchedule(graphs_[0], initial_informed=initial)
    if kind == "sequence":
        return SequenceSchedule(
            graphs_,
            repeat_last=manifest.get("repeat_last", True),
            initial_informed=initial,
        )
    raise ValueError(f"unknown schedule kind {kind!r}")


def observed_family_metrics(n: int, k: int, delta: int, seed: int) -> dict:
    """Measured conductance/diligence of one bottleneck graph next to the
    scale factors they are meant to track (delta^2/(k delta^2 + n) and
    1/delta)."""
    from dynrumor import metrics

    g, layout = bottleneck_graph(n, k, delta, seed)
    phi, _ = metrics.conductance_exact(g, cap=max(metrics.DEFAULT_CAP, n))
    rho, _ = metrics.diligence_exact(g, cap=max(metrics.DEFAULT_CAP, n))
    phi_scale = delta**2 / (k * delta**2 + n)
    rho_scale = 1.0 / delta
    return {
        "n": n,
        "k": k,
        "delta": delta,
        "conductance": float(phi),
        "diligence": float(rho),
        "conductance_scale": phi_scale,
        "diligence_scale": rho_scale,
        "conductance_ratio": float(phi) / phi_scale,
        "diligence_ratio": float(rho) / rho_scale,
    }
