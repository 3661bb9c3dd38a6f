"""Pure-Python kernels.

Reference implementations of the hot inner loops: subset scans for the cut
metrics and the event-driven asynchronous engine.  ``dynrumor._core`` is the
compiled twin; both consume the same counter-based draws in the same order,
so traces and scan results are identical bit for bit whichever is loaded
(see tests/test_kernels.py).
"""

from __future__ import annotations

import heapq
import math
from collections import namedtuple

from dynrumor import _rng

IMPLEMENTATION = "python"

#: One pending clock tick: ``sequence`` is the per-vertex tick counter that
#: keys the draws, and the monotone tiebreaker after (time, vertex).
ClockEvent = namedtuple("ClockEvent", ("time", "vertex", "sequence"))

STATUS_SEGMENT_DONE = 0
STATUS_STOPPED = 1
STATUS_TRACE_FULL = 2

MAX_SCAN_VERTICES = 25


def rng_u64(seed: int, stream: int, a: int, b: int) -> int:
    """Test hook: the raw keyed draw this kernel consumes."""
    return _rng.keyed_u64(seed, stream, a, b)


def _degrees_and_masks(indptr, indices, n):
    deg = [0] * n
    nbr = [0] * n
    for u in range(n):
        lo, hi = int(indptr[u]), int(indptr[u + 1])
        deg[u] = hi - lo
        mask = 0
        for j in range(lo, hi):
            mask |= 1 << int(indices[j])
        nbr[u] = mask
    return deg, nbr


def _lex_prefers(new_mask: int, old_mask: int) -> bool:
    """True if new_mask is the lexicographically smaller vertex set."""
    diff = new_mask ^ old_mask
    low = diff & -diff
    return bool(new_mask & low)


def conductance_scan(indptr, indices, n):
    """Minimize cut(S)/min(vol S, vol S-bar) over proper nonempty S.

    Returns (numerator, denominator, bitmask) of the best subset, ties
    resolved toward the lexicographically smallest vertex set; mask -1 when
    no subset has positive denominator.
    """
    if n > MAX_SCAN_VERTICES:
        raise ValueError(f"subset scan limited to n <= {MAX_SCAN_VERTICES}, got {n}")
    deg, nbr = _degrees_and_masks(indptr, indices, n)
    vol_g = sum(deg)
    full = (1 << n) - 1
    best_num, best_den, best_mask = 0, 0, -1
    cur = 0
    vol = 0
    cut = 0
    for k in range(1, 1 << n):
        b = (k & -k).bit_length() - 1
        bit = 1 << b
        if cur & bit:
            cur ^= bit
            inside = (nbr[b] & cur).bit_count()
            cut -= deg[b] - 2 * inside
            vol -= deg[b]
        else:
            inside = (nbr[b] & cur).bit_count()
            cut += deg[b] - 2 * inside
            cur |= bit
            vol += deg[b]
        if cur == full:
            continue
        den = vol if 2 * vol <= vol_g else vol_g - vol
        if den <= 0:
            continue
        if best_mask < 0:
            better = True
        else:
            lhs = cut * best_den
            rhs = best_num * den
            better = lhs < rhs or (lhs == rhs and _lex_prefers(cur, best_mask))
        if better:
            best_num, best_den, best_mask = cut, den, cur
    return best_num, best_den, best_mask


def diligence_scan(indptr, indices, n):
    """Minimize vol(S)/(|S| * M(S)) over S with 0 < vol(S) <= vol(G)/2.

    M(S) is the largest min-degree over edges crossing the cut.  Returns
    (numerator, denominator, bitmask); mask -1 when no subset qualifies.
    """
    if n > MAX_SCAN_VERTICES:
        raise ValueError(f"subset scan limited to n <= {MAX_SCAN_VERTICES}, got {n}")
    deg, nbr = _degrees_and_masks(indptr, indices, n)
    vol_g = sum(deg)
    edges = []
    for u in range(n):
        for j in range(int(indptr[u]), int(indptr[u + 1])):
            v = int(indices[j])
            if u < v:
                edges.append((-min(deg[u], deg[v]), u, v))
    edges.sort()  # descending min-degree, then lexicographic
    best_num, best_den, best_mask = 0, 0, -1
    cur = 0
    vol = 0
    size = 0
    for k in range(1, 1 << n):
        b = (k & -k).bit_length() - 1
        bit = 1 << b
        if cur & bit:
            cur ^= bit
            vol -= deg[b]
            size -= 1
        else:
            cur |= bit
            vol += deg[b]
            size += 1
        if vol == 0 or 2 * vol > vol_g:
            continue
        m_s = 0
        for negmind, u, v in edges:
            if ((cur >> u) ^ (cur >> v)) & 1:
                m_s = -negmind
                break
        if m_s == 0:
            continue
        num = vol
        den = size * m_s
        if best_mask < 0:
            better = True
        else:
            lhs = num * best_den
            rhs = best_num * den
            better = lhs < rhs or (lhs == rhs and _lex_prefers(cur, best_mask))
        if better:
            best_num, best_den, best_mask = num, den, cur
    return best_num, best_den, best_mask


def _choice(d: int, seed: int, u: int, seq: int) -> int:
    x = _rng.keyed_uniform(seed, _rng.CHOICE, u, seq)
    j = int(x * d)
    return d - 1 if j >= d else j


def async_segment(
    indptr,
    indices,
    layer,
    k_limit,
    informed,
    informed_count,
    next_time,
    tick_seq,
    t_end,
    seed,
    protocol,
    stop_mode,
    record,
    tr_time,
    tr_caller,
    tr_callee,
    tr_flag,
    tr_len,
):
    """Process all clock ticks strictly before ``t_end`` on one snapshot.

    protocol: 0 push-pull (rate 1), 1 two-push (rate 2, push only),
    2 forward two-push (rate 2, pushes to the next layer only).
    stop_mode: 0 stop on completion, 1 stop on the first transfer.
    Mutates informed/next_time/tick_seq and the trace arrays in place;
    returns (status, informed_count, stop_time, tr_len).  Re-invoking with
    the same arguments resumes cleanly after STATUS_TRACE_FULL.
    """
    n = len(informed)
    rate = 1.0 if protocol == 0 else 2.0
    cap = len(tr_time)
    heap = []
    for v in range(n):
        tv = next_time[v]
        if tv < t_end:
            heap.append(ClockEvent(tv, v, int(tick_seq[v])))
    heapq.heapify(heap)
    status = STATUS_SEGMENT_DONE
    stop_time = -1.0
    count = int(informed_count)
    while heap:
        if record and tr_len >= cap:
            status = STATUS_TRACE_FULL
            break
        ev = heap[0]
        tau = float(ev.time)
        u = ev.vertex
        seq = ev.sequence
        contact = -2  # -2 = nothing to log, -1 = tick without contact
        moved = 0
        if protocol == 0:
            lo = int(indptr[u])
            d = int(indptr[u + 1]) - lo
            if d == 0:
                contact = -1
            else:
                v = int(indices[lo + _choice(d, seed, u, seq)])
                if informed[u] != informed[v]:
                    w = v if informed[u] else u
                    informed[w] = 1
                    count += 1
                    moved = 1
                contact = v
        elif protocol == 1:
            if informed[u]:
                lo = int(indptr[u])
                d = int(indptr[u + 1]) - lo
                if d == 0:
                    contact = -1
                else:
                    v = int(indices[lo + _choice(d, seed, u, seq)])
                    if not informed[v]:
                        informed[v] = 1
                        count += 1
                        moved = 1
                    contact = v
        else:
            if informed[u]:
                lo = int(indptr[u])
                hi = int(indptr[u + 1])
                nxt = int(layer[u]) + 1
                d = 0
                for idx in range(lo, hi):
                    if layer[indices[idx]] == nxt:
                        d += 1
                if d == 0:
                    contact = -1
                else:
                    j = _choice(d, seed, u, seq)
                    v = -1
                    c = 0
                    for idx in range(lo, hi):
                        w = int(indices[idx])
                        if layer[w] == nxt:
                            if c == j:
                                v = w
                                break
                            c += 1
                    if not informed[v]:
                        informed[v] = 1
                        count += 1
                        moved = 1
                    contact = v
        if record and contact != -2:
            tr_time[tr_len] = tau
            tr_caller[tr_len] = u
            tr_callee[tr_len] = contact
            tr_flag[tr_len] = moved
            tr_len += 1
        gap = -math.log(_rng.keyed_uniform(seed, _rng.TICK, u, seq + 1)) / rate
        nt = tau + gap
        tick_seq[u] = seq + 1
        next_time[u] = nt
        if nt < t_end:
            heapq.heapreplace(heap, ClockEvent(nt, u, seq + 1))
        else:
            heapq.heappop(heap)
        if moved and (count == n or stop_mode == 1):
            status = STATUS_STOPPED
            stop_time = tau
            break
    return status, count, stop_time, tr_len
