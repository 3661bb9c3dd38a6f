"""Exact cut metrics: conductance, diligence, absolute diligence.

All values are exact rationals (:class:`fractions.Fraction`).  Conductance
and diligence enumerate every vertex subset, so they are gated behind a
brute-force cap (default 20 vertices); absolute diligence is a single pass
over the edges and has no cap.

Definitions, for a graph G with degrees d_u and vol(S) = sum of degrees:

* conductance:  min over proper nonempty S of |cut(S)| / min(vol S, vol S̄)
* diligence:    min over S with 0 < vol(S) <= vol(G)/2 of
                min over cut edges {u,v} of max(d̄(S)/d_u, d̄(S)/d_v),
                where d̄(S) = vol(S)/|S| is the average degree of the
                smaller-volume side
* absolute diligence:  min over edges {u,v} of max(1/d_u, 1/d_v)

Disconnected graphs have conductance = diligence = 0 (witnessed by a
connected component); an edgeless graph has absolute diligence 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from dynrumor import _kernels
from dynrumor.graphs import Graph

DEFAULT_CAP = 20


class BruteForceCapError(ValueError):
    """Exact subset enumeration refused: the graph exceeds the cap."""

    def __init__(self, n: int, cap: int):
        super().__init__(
            f"graph has n={n} vertices; exact subset enumeration is capped at "
            f"cap={cap} (raise the cap explicitly if you really mean it)"
        )
        self.n = n
        self.cap = cap


def _check_cap(g: Graph, cap: int) -> None:
    if g.n > cap:
        raise BruteForceCapError(g.n, cap)
    if cap > _kernels.MAX_SCAN_VERTICES and g.n > _kernels.MAX_SCAN_VERTICES:
        raise BruteForceCapError(g.n, _kernels.MAX_SCAN_VERTICES)


def _mask_to_set(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def conductance_exact(g: Graph, cap: int = DEFAULT_CAP) -> tuple[Fraction, frozenset[int] | None]:
    """Exact conductance and a minimizing subset.

    Ties resolve to the lexicographically smallest witness.  A single-vertex
    graph has no proper nonempty subset; it reports conductance 1 with no
    witness.  Disconnected graphs report 0 witnessed by a component.
    """
    _check_cap(g, cap)
    if g.n == 1:
        return Fraction(1), None
    if not g.is_connected():
        return Fraction(0), g.component_of(0)
    indptr, indices = g.csr()
    num, den, mask = _kernels.conductance_scan(indptr, indices, g.n)
    return Fraction(num, den), _mask_to_set(mask)


def diligence_exact(g: Graph, cap: int = DEFAULT_CAP) -> tuple[Fraction, frozenset[int] | None]:
    """Exact diligence and a minimizing subset (same conventions as above)."""
    _check_cap(g, cap)
    if g.n == 1:
        return Fraction(1), None
    if not g.is_connected():
        return Fraction(0), g.component_of(0)
    indptr, indices = g.csr()
    num, den, mask = _kernels.diligence_scan(indptr, indices, g.n)
    return Fraction(num, den), _mask_to_set(mask)


def absolute_diligence(g: Graph) -> tuple[Fraction, tuple[int, int] | None]:
    """min over edges of max(1/d_u, 1/d_v); (0, None) for edgeless graphs.

    Polynomial time -- no cap.  The witness is the lexicographically
    smallest minimizing edge.
    """
    best = 0
    witness = None
    degs = g.degrees
    for u, v in g.edges():
        mind = int(min(degs[u], degs[v]))
        if mind > best:
            best = mind
            witness = (u, v)
    if witness is None:
        return Fraction(0), None
    return Fraction(1, best), witness


@dataclass(frozen=True)
class CutView:
    """One side of a cut with the quantities the diligence definition needs."""

    subset: frozenset[int]
    cut_edges: tuple[tuple[int, int], ...]
    vol_subset: int
    vol_complement: int
    avg_degree: Fraction


def cut_view(g: Graph, subset) -> CutView:
    s = frozenset(int(v) for v in subset)
    if not s:
        raise ValueError("subset is empty")
    if not s.issubset(range(g.n)):
        raise ValueError(f"subset has vertices outside 0..{g.n - 1}")
    vol_s = g.vol(s)
    cut = tuple(
        (u, v) for u, v in g.edges() if (u in s) != (v in s)
    )
    return CutView(
        subset=s,
        cut_edges=cut,
        vol_subset=vol_s,
        vol_complement=2 * g.m - vol_s,
        avg_degree=Fraction(vol_s, len(s)),
    )


def cut_diligence(g: Graph, subset) -> Fraction | None:
    """Diligence of one subset; None when no edge crosses the cut.

    Requires 0 < vol(subset) <= vol(G)/2 (the definition measures the
    smaller-volume side).
    """
    view = cut_view(g, subset)
    if view.vol_subset == 0:
        raise ValueError("vol(subset) = 0; need 0 < vol(subset) <= vol(G)/2")
    if 2 * view.vol_subset > 2 * g.m:
        raise ValueError(
            f"vol(subset) = {view.vol_subset} exceeds vol(G)/2 = {Fraction(2 * g.m, 2)}"
        )
    if not view.cut_edges:
        return None
    degs = g.degrees
    best: Fraction | None = None
    for u, v in view.cut_edges:
        val = view.avg_degree / min(int(degs[u]), int(degs[v]))
        if best is None or val < best:
            best = val
    return best


@dataclass(frozen=True)
class MetricReport:
    """All three metrics of one snapshot plus their witnesses."""

    n: int
    m: int
    connected: bool
    conductance: Fraction
    diligence: Fraction
    absolute_diligence: Fraction
    conductance_witness: frozenset[int] | None
    diligence_witness: frozenset[int] | None
    absolute_witness: tuple[int, int] | None

    def to_dict(self) -> dict:
        def frac(x: Fraction):
            return {"num": x.numerator, "den": x.denominator, "value": float(x)}

        return {
            "n": self.n,
            "m": self.m,
            "connected": self.connected,
            "conductance": frac(self.conductance),
            "diligence": frac(self.diligence),
            "absolute_diligence": frac(self.absolute_diligence),
            "conductance_witness": sorted(self.conductance_witness)
            if self.conductance_witness is not None
            else None,
            "diligence_witness": sorted(self.diligence_witness)
            if self.diligence_witness is not None
            else None,
            "absolute_witness": list(self.absolute_witness)
            if self.absolute_witness is not None
            else None,
        }


def metric_report(g: Graph, cap: int = DEFAULT_CAP) -> MetricReport:
    phi, phi_w = conductance_exact(g, cap)
    rho, rho_w = diligence_exact(g, cap)
    rho_abs, edge_w = absolute_diligence(g)
    return MetricReport(
        n=g.n,
        m=g.m,
        connected=g.is_connected(),
        conductance=phi,
        diligence=rho,
        absolute_diligence=rho_abs,
        conductance_witness=phi_w,
        diligence_witness=rho_w,
        absolute_witness=edge_w,
    )
