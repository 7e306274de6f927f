# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled canonical labeling kernel (graphs of at most 64 vertices).

Same refinement tree, target-cell rule and prunings as ``_canon_py``; the
returned certificate is identical, which the test suite checks.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

cdef enum:
    MAXN = 64
    MAXAUT = 64

cdef struct Part:
    int ncells
    int lab[MAXN]
    int cstart[MAXN + 1]

cdef struct Ctx:
    int n
    uint64_t adj[MAXN]
    int have_best
    uint64_t best[MAXN]
    int best_order[MAXN]
    int nautos
    int autos[MAXAUT][MAXN]


cdef inline int _sig_cmp(unsigned char* a, unsigned char* b, int k) noexcept nogil:
    cdef int i
    for i in range(k):
        if a[i] != b[i]:
            return -1 if a[i] < b[i] else 1
    return 0


cdef void _refine(Part* p, const uint64_t* adj) noexcept nogil:
    cdef uint64_t masks[MAXN]
    cdef unsigned char sig[MAXN][MAXN]
    cdef int idx[MAXN]
    cdef Part q
    cdef int c, i, j, s, e, t, pos, changed, k, v
    while True:
        k = p.ncells
        for c in range(k):
            masks[c] = 0
            for i in range(p.cstart[c], p.cstart[c + 1]):
                masks[c] |= (<uint64_t>1) << p.lab[i]
        changed = 0
        q.ncells = 0
        pos = 0
        for c in range(k):
            s = p.cstart[c]
            e = p.cstart[c + 1]
            if e - s == 1:
                q.cstart[q.ncells] = pos
                q.lab[pos] = p.lab[s]
                pos += 1
                q.ncells += 1
                continue
            for i in range(e - s):
                v = p.lab[s + i]
                for j in range(k):
                    sig[i][j] = <unsigned char>__builtin_popcountll(adj[v] & masks[j])
                idx[i] = i
            # stable insertion sort of the cell by signature
            for i in range(1, e - s):
                t = idx[i]
                j = i - 1
                while j >= 0 and _sig_cmp(sig[idx[j]], sig[t], k) > 0:
                    idx[j + 1] = idx[j]
                    j -= 1
                idx[j + 1] = t
            for i in range(e - s):
                if i == 0 or _sig_cmp(sig[idx[i - 1]], sig[idx[i]], k) != 0:
                    if i > 0:
                        changed = 1
                    q.cstart[q.ncells] = pos
                    q.ncells += 1
                q.lab[pos] = p.lab[s + idx[i]]
                pos += 1
        q.cstart[q.ncells] = pos
        p[0] = q
        if not changed:
            return


cdef void _leaf(Ctx* ctx, Part* p) noexcept nogil:
    cdef int n = ctx.n
    cdef int pos[MAXN]
    cdef uint64_t rows[MAXN]
    cdef int i, cmp
    cdef uint64_t a, low, r
    for i in range(n):
        pos[p.lab[i]] = i
    for i in range(n):
        a = ctx.adj[p.lab[i]]
        r = 0
        while a:
            low = a & (~a + 1)
            r |= (<uint64_t>1) << pos[__builtin_popcountll(low - 1)]
            a ^= low
        rows[i] = r
    cmp = 1
    if ctx.have_best:
        cmp = 0
        for i in range(n):
            if rows[i] != ctx.best[i]:
                cmp = 1 if rows[i] > ctx.best[i] else -1
                break
    if cmp > 0:
        ctx.have_best = 1
        for i in range(n):
            ctx.best[i] = rows[i]
            ctx.best_order[i] = p.lab[i]
    elif cmp == 0 and ctx.nautos < MAXAUT:
        for i in range(n):
            ctx.autos[ctx.nautos][ctx.best_order[i]] = p.lab[i]
        ctx.nautos += 1


cdef int _find(int* parent, int x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef int _same_orbit(Ctx* ctx, int u, int v, int* prefix, int plen) noexcept nogil:
    cdef int parent[MAXN]
    cdef int i, g, x, a, b, ok
    for i in range(ctx.n):
        parent[i] = i
    for g in range(ctx.nautos):
        ok = 1
        for i in range(plen):
            if ctx.autos[g][prefix[i]] != prefix[i]:
                ok = 0
                break
        if not ok:
            continue
        for x in range(ctx.n):
            a = _find(parent, x)
            b = _find(parent, ctx.autos[g][x])
            if a != b:
                parent[a] = b
    return _find(parent, u) == _find(parent, v)


cdef void _search(Ctx* ctx, Part* p, int* prefix, int plen) noexcept nogil:
    cdef int n = ctx.n
    cdef int ti = -1
    cdef int size = n + 1
    cdef int c, sz, s, e, i, j, v, u, skip, ntried, w
    cdef int tried[MAXN]
    cdef int cell[MAXN]
    cdef Part q
    cdef uint64_t bu, bv
    if p.ncells == n:
        _leaf(ctx, p)
        return
    for c in range(p.ncells):
        sz = p.cstart[c + 1] - p.cstart[c]
        if 1 < sz < size:
            ti = c
            size = sz
    s = p.cstart[ti]
    e = p.cstart[ti + 1]
    for i in range(e - s):
        cell[i] = p.lab[s + i]
    ntried = 0
    for i in range(e - s):
        v = cell[i]
        bv = (<uint64_t>1) << v
        skip = 0
        for j in range(ntried):
            u = tried[j]
            bu = (<uint64_t>1) << u
            if (ctx.adj[u] & ~bv) == (ctx.adj[v] & ~bu):
                skip = 1
                break
        if not skip and ctx.nautos:
            for j in range(ntried):
                if _same_orbit(ctx, tried[j], v, prefix, plen):
                    skip = 1
                    break
        if skip:
            continue
        # split target cell into [v] + rest
        q.ncells = 0
        for c in range(ti):
            q.cstart[q.ncells] = p.cstart[c]
            q.ncells += 1
        for c in range(s):
            q.lab[c] = p.lab[c]
        q.cstart[q.ncells] = s
        q.ncells += 1
        q.lab[s] = v
        q.cstart[q.ncells] = s + 1
        q.ncells += 1
        w = s + 1
        for j in range(e - s):
            if cell[j] != v:
                q.lab[w] = cell[j]
                w += 1
        for c in range(e, n):
            q.lab[c] = p.lab[c]
        for c in range(ti + 1, p.ncells):
            q.cstart[q.ncells] = p.cstart[c]
            q.ncells += 1
        q.cstart[q.ncells] = n
        _refine(&q, ctx.adj)
        prefix[plen] = v
        _search(ctx, &q, prefix, plen + 1)
        tried[ntried] = v
        ntried += 1


def canonical_form(adj, colors):
    """Return ``(order, cert)``; see ``_canon_py.canonical_form``."""
    cdef int n = len(adj)
    cdef int i, c
    cdef Ctx* ctx
    cdef Part p
    cdef int prefix[MAXN]
    if n == 0:
        return (), ()
    if n > MAXN:
        raise ValueError("compiled kernel supports at most 64 vertices")
    ctx = <Ctx*>malloc(sizeof(Ctx))
    if ctx == NULL:
        raise MemoryError()
    try:
        ctx.n = n
        ctx.have_best = 0
        ctx.nautos = 0
        for i in range(n):
            ctx.adj[i] = <uint64_t>adj[i]
        distinct = sorted(set(colors))
        p.ncells = 0
        i = 0
        for col in distinct:
            p.cstart[p.ncells] = i
            p.ncells += 1
            for c in range(n):
                if colors[c] == col:
                    p.lab[i] = c
                    i += 1
        p.cstart[p.ncells] = n
        with nogil:
            _refine(&p, ctx.adj)
            _search(ctx, &p, prefix, 0)
        order = tuple([ctx.best_order[i] for i in range(n)])
        cert = tuple([ctx.best[i] for i in range(n)])
    finally:
        free(ctx)
    return order, cert
