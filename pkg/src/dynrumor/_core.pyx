# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels.

Same contracts and draw order as ``dynrumor._core_py``; that module is the
readable reference, this one is the fast path.  Keep the two in lockstep --
tests/test_kernels.py asserts bit-for-bit agreement.
"""

from libc.math cimport log
from libc.stdlib cimport free, malloc

IMPLEMENTATION = "compiled"

STATUS_SEGMENT_DONE = 0
STATUS_STOPPED = 1
STATUS_TRACE_FULL = 2
MAX_SCAN_VERTICES = 25

ctypedef unsigned long long u64

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int dr_popcnt64(unsigned long long x){ return __builtin_popcountll(x); }
    static inline int dr_ctz64(unsigned long long x){ return __builtin_ctzll(x); }
    #else
    static inline int dr_popcnt64(unsigned long long x){ int c = 0; while (x) { x &= x - 1; c++; } return c; }
    static inline int dr_ctz64(unsigned long long x){ int c = 0; while (!(x & 1ULL)) { x >>= 1; c++; } return c; }
    #endif
    """
    int dr_popcnt64(u64 x) nogil
    int dr_ctz64(u64 x) nogil

cdef double INV52 = 2.0 ** -52
cdef u64 MASK64 = <u64>0xFFFFFFFFFFFFFFFF


cdef inline u64 _fin(u64 z) nogil:
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline u64 _keyed(u64 seed, u64 stream, u64 a, u64 b) nogil:
    cdef u64 g = <u64>0x9E3779B97F4A7C15
    cdef u64 h = seed
    h = _fin(h + g * (stream + 1))
    h = _fin(h + g * (a + 1))
    h = _fin(h + g * (b + 1))
    return h


cdef inline double _uniform(u64 seed, u64 stream, u64 a, u64 b) nogil:
    return (<double>(_keyed(seed, stream, a, b) >> 12) + 0.5) * INV52


def rng_u64(seed, stream, a, b):
    """Test hook: the raw keyed draw this kernel consumes."""
    return _keyed(
        <u64>(seed & 0xFFFFFFFFFFFFFFFF),
        <u64>(stream & 0xFFFFFFFFFFFFFFFF),
        <u64>(a & 0xFFFFFFFFFFFFFFFF),
        <u64>(b & 0xFFFFFFFFFFFFFFFF),
    )


cdef inline bint _lex_prefers(u64 new_mask, u64 old_mask) nogil:
    cdef u64 diff = new_mask ^ old_mask
    cdef u64 low = diff & (0 - diff)
    return (new_mask & low) != 0


def conductance_scan(const long long[::1] indptr, const int[::1] indices, int n):
    """See _core_py.conductance_scan."""
    if n > MAX_SCAN_VERTICES:
        raise ValueError(f"subset scan limited to n <= {MAX_SCAN_VERTICES}, got {n}")
    cdef long long deg[32]
    cdef u64 nbr[32]
    cdef int u, b, inside
    cdef long long j, vol_g = 0
    for u in range(n):
        deg[u] = indptr[u + 1] - indptr[u]
        vol_g += deg[u]
        nbr[u] = 0
        for j in range(indptr[u], indptr[u + 1]):
            nbr[u] |= (<u64>1) << indices[j]
    cdef u64 full = ((<u64>1) << n) - 1
    cdef u64 cur = 0, bit, k, kmax = (<u64>1) << n
    cdef u64 best_mask = 0
    cdef int have = 0
    cdef long long best_num = 0, best_den = 0
    cdef long long vol = 0, cut = 0, den, lhs, rhs
    cdef bint better
    for k in range(1, kmax):
        b = dr_ctz64(k)
        bit = (<u64>1) << b
        if cur & bit:
            cur ^= bit
            inside = dr_popcnt64(nbr[b] & cur)
            cut -= deg[b] - 2 * inside
            vol -= deg[b]
        else:
            inside = dr_popcnt64(nbr[b] & cur)
            cut += deg[b] - 2 * inside
            cur |= bit
            vol += deg[b]
        if cur == full:
            continue
        den = vol if 2 * vol <= vol_g else vol_g - vol
        if den <= 0:
            continue
        if not have:
            better = True
        else:
            lhs = cut * best_den
            rhs = best_num * den
            better = lhs < rhs or (lhs == rhs and _lex_prefers(cur, best_mask))
        if better:
            best_num = cut
            best_den = den
            best_mask = cur
            have = 1
    if not have:
        return 0, 0, -1
    return int(best_num), int(best_den), int(best_mask)


def diligence_scan(const long long[::1] indptr, const int[::1] indices, int n):
    """See _core_py.diligence_scan."""
    if n > MAX_SCAN_VERTICES:
        raise ValueError(f"subset scan limited to n <= {MAX_SCAN_VERTICES}, got {n}")
    cdef long long deg[32]
    cdef int u, v, b, i
    cdef long long j, vol_g = 0
    for u in range(n):
        deg[u] = indptr[u + 1] - indptr[u]
        vol_g += deg[u]
    # crossing-edge scan order: descending min-degree, then lexicographic
    pyedges = []
    for u in range(n):
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if u < v:
                pyedges.append((-min(deg[u], deg[v]), u, v))
    pyedges.sort()
    cdef int ecount = len(pyedges)
    cdef int eu[325]
    cdef int ev[325]
    cdef long long emind[325]
    for i in range(ecount):
        emind[i] = -<long long>(pyedges[i][0])
        eu[i] = pyedges[i][1]
        ev[i] = pyedges[i][2]
    cdef u64 cur = 0, bit, k, kmax = (<u64>1) << n
    cdef u64 best_mask = 0
    cdef int have = 0
    cdef long long best_num = 0, best_den = 0
    cdef long long vol = 0, size = 0, m_s, num, den, lhs, rhs
    cdef bint better
    for k in range(1, kmax):
        b = dr_ctz64(k)
        bit = (<u64>1) << b
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
        for i in range(ecount):
            if ((cur >> eu[i]) ^ (cur >> ev[i])) & 1:
                m_s = emind[i]
                break
        if m_s == 0:
            continue
        num = vol
        den = size * m_s
        if not have:
            better = True
        else:
            lhs = num * best_den
            rhs = best_num * den
            better = lhs < rhs or (lhs == rhs and _lex_prefers(cur, best_mask))
        if better:
            best_num = num
            best_den = den
            best_mask = cur
            have = 1
    if not have:
        return 0, 0, -1
    return int(best_num), int(best_den), int(best_mask)


cdef inline bint _lt(double t1, int v1, double t2, int v2) nogil:
    return t1 < t2 or (t1 == t2 and v1 < v2)


cdef inline void _sift_down(double* ht, int* hv, int size, int start) nogil:
    cdef double t = ht[start]
    cdef int v = hv[start]
    cdef int i = start, child
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and _lt(ht[child + 1], hv[child + 1], ht[child], hv[child]):
            child += 1
        if _lt(ht[child], hv[child], t, v):
            ht[i] = ht[child]
            hv[i] = hv[child]
            i = child
        else:
            break
    ht[i] = t
    hv[i] = v


cdef inline int _choice(int d, u64 seed, u64 u, u64 seq) nogil:
    cdef double x = _uniform(seed, <u64>2, u, seq)
    cdef int j = <int>(x * d)
    return d - 1 if j >= d else j


def async_segment(
    const long long[::1] indptr,
    const int[::1] indices,
    const int[::1] layer,
    int k_limit,
    unsigned char[::1] informed,
    long long informed_count,
    double[::1] next_time,
    long long[::1] tick_seq,
    double t_end,
    object seed_obj,
    int protocol,
    int stop_mode,
    int record,
    double[::1] tr_time,
    int[::1] tr_caller,
    int[::1] tr_callee,
    unsigned char[::1] tr_flag,
    long long tr_len,
):
    """See _core_py.async_segment."""
    cdef u64 seed = <u64>(seed_obj & 0xFFFFFFFFFFFFFFFF)
    cdef int n = informed.shape[0]
    cdef double rate = 1.0 if protocol == 0 else 2.0
    cdef long long cap = tr_time.shape[0]
    cdef double* ht = <double*>malloc(n * sizeof(double))
    cdef int* hv = <int*>malloc(n * sizeof(int))
    if ht == NULL or hv == NULL:
        free(ht)
        free(hv)
        raise MemoryError()
    cdef int hsize = 0, i, u, v, w, d, j, c, nxt, contact, moved
    cdef long long lo, hi, idx, seq
    cdef double tau, nt, gap, x
    for i in range(n):
        if next_time[i] < t_end:
            ht[hsize] = next_time[i]
            hv[hsize] = i
            hsize += 1
    for i in range(hsize // 2 - 1, -1, -1):
        _sift_down(ht, hv, hsize, i)
    cdef int status = STATUS_SEGMENT_DONE
    cdef double stop_time = -1.0
    cdef long long count = informed_count
    while hsize > 0:
        if record and tr_len >= cap:
            status = STATUS_TRACE_FULL
            break
        tau = ht[0]
        u = hv[0]
        seq = tick_seq[u]
        contact = -2
        moved = 0
        if protocol == 0:
            lo = indptr[u]
            d = <int>(indptr[u + 1] - lo)
            if d == 0:
                contact = -1
            else:
                v = indices[lo + _choice(d, seed, <u64>u, <u64>seq)]
                if informed[u] != informed[v]:
                    w = v if informed[u] else u
                    informed[w] = 1
                    count += 1
                    moved = 1
                contact = v
        elif protocol == 1:
            if informed[u]:
                lo = indptr[u]
                d = <int>(indptr[u + 1] - lo)
                if d == 0:
                    contact = -1
                else:
                    v = indices[lo + _choice(d, seed, <u64>u, <u64>seq)]
                    if not informed[v]:
                        informed[v] = 1
                        count += 1
                        moved = 1
                    contact = v
        else:
            if informed[u]:
                lo = indptr[u]
                hi = indptr[u + 1]
                nxt = layer[u] + 1
                d = 0
                for idx in range(lo, hi):
                    if layer[indices[idx]] == nxt:
                        d += 1
                if d == 0:
                    contact = -1
                else:
                    j = _choice(d, seed, <u64>u, <u64>seq)
                    v = -1
                    c = 0
                    for idx in range(lo, hi):
                        w = indices[idx]
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
        gap = -log(_uniform(seed, <u64>1, <u64>u, <u64>(seq + 1))) / rate
        nt = tau + gap
        tick_seq[u] = seq + 1
        next_time[u] = nt
        if nt < t_end:
            ht[0] = nt
            hv[0] = u
            _sift_down(ht, hv, hsize, 0)
        else:
            hsize -= 1
            if hsize > 0:
                ht[0] = ht[hsize]
                hv[0] = hv[hsize]
                _sift_down(ht, hv, hsize, 0)
        if moved and (count == n or stop_mode == 1):
            status = STATUS_STOPPED
            stop_time = tau
            break
    free(ht)
    free(hv)
    return status, count, stop_time, tr_len
