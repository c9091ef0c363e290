# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled propagation and search kernels (see _pykernels for the contract)."""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

BACKEND = "cython"

ctypedef unsigned short dom_t


cdef int _propagate(dom_t* D, int n, int* q, int qn, char* inq,
                    const int[:] arc_ptr, const int[:] arc_x, const int[:] arc_rel,
                    const dom_t[:] sup, const int[:] t_ptr, const int[:] t_ids,
                    const int[:] tvars, const dom_t[:] ttab) noexcept nogil:
    cdef int i, y, x, idx, c, s, t, v, j
    cdef dom_t dy, nd, dx, dz, m, nx, ny, nz, mx, my
    cdef int tv[3]
    cdef dom_t nw[3]
    cdef int base, row
    for i in range(qn):
        inq[q[i]] = 1
    while qn > 0:
        qn -= 1
        y = q[qn]
        inq[y] = 0
        dy = D[y]
        for idx in range(arc_ptr[y], arc_ptr[y + 1]):
            x = arc_x[idx]
            nd = D[x] & sup[(arc_rel[idx] << 12) | dy]
            if nd != D[x]:
                if nd == 0:
                    return 0
                D[x] = nd
                if not inq[x]:
                    inq[x] = 1
                    q[qn] = x
                    qn += 1
        for idx in range(t_ptr[y], t_ptr[y + 1]):
            c = t_ids[idx]
            tv[0] = tvars[3 * c]
            tv[1] = tvars[3 * c + 1]
            tv[2] = tvars[3 * c + 2]
            dx = D[tv[0]]
            dy = D[tv[1]]
            dz = D[tv[2]]
            nx = 0
            ny = 0
            nz = 0
            base = 144 * c
            mx = dx
            s = 0
            while mx:
                if mx & 1:
                    row = base + 12 * s
                    my = dy
                    t = 0
                    while my:
                        if my & 1:
                            m = ttab[row + t] & dz
                            if m:
                                nz |= m
                                nx |= <dom_t>(1 << s)
                                ny |= <dom_t>(1 << t)
                        my >>= 1
                        t += 1
                mx >>= 1
                s += 1
            nw[0] = nx
            nw[1] = ny
            nw[2] = nz
            for j in range(3):
                v = tv[j]
                nd = nw[j] & D[v]
                if nd != D[v]:
                    if nd == 0:
                        return 0
                    D[v] = nd
                    if not inq[v]:
                        inq[v] = 1
                        q[qn] = v
                        qn += 1
            dy = D[y]
    return 1


cdef inline int _select(const dom_t* D, const int[:] order, int n) noexcept nogil:
    cdef int i, v
    cdef dom_t d
    for i in range(n):
        v = order[i]
        d = D[v]
        if d & (d - 1):
            return v
    return -1


cdef tuple _decode(const dom_t* D, int n):
    cdef int i, k
    cdef dom_t d
    out = []
    for i in range(n):
        d = D[i]
        k = 0
        while d > 1:
            d >>= 1
            k += 1
        out.append(k)
    return tuple(out)


def solve(dom0, const int[:] arc_ptr, const int[:] arc_x, const int[:] arc_rel,
          const dom_t[:] sup, const int[:] t_ptr, const int[:] t_ids,
          const int[:] tvars, const dom_t[:] ttab, const int[:] order,
          long limit=0, long long budget=0):
    cdef int n = len(dom0)
    cdef int i, v, w, depth, ok
    cdef long long nodes = 0
    cdef dom_t mask, low
    cdef dom_t* levels = <dom_t*> malloc((n + 2) * max(n, 1) * sizeof(dom_t))
    cdef int* vars_ = <int*> malloc((n + 2) * sizeof(int))
    cdef dom_t* masks = <dom_t*> malloc((n + 2) * sizeof(dom_t))
    cdef int* q = <int*> malloc((n + 1) * sizeof(int))
    cdef char* inq = <char*> malloc(n + 1)
    cdef dom_t* cur
    sols = []
    status = 0
    try:
        for i in range(n):
            levels[i] = dom0[i]
            if levels[i] == 0:
                return 0, 0, sols
        memset(inq, 0, n + 1)
        for i in range(n):
            q[i] = i
        if not _propagate(levels, n, q, n, inq, arc_ptr, arc_x, arc_rel, sup,
                          t_ptr, t_ids, tvars, ttab):
            return 0, 0, sols
        v = _select(levels, order, n)
        if v < 0:
            sols.append(_decode(levels, n))
            return (1 if limit and len(sols) >= limit else 0), 0, sols
        depth = 0
        vars_[0] = v
        masks[0] = levels[v]
        while depth >= 0:
            mask = masks[depth]
            if mask == 0:
                depth -= 1
                continue
            low = mask & (~mask + 1)
            masks[depth] = mask ^ low
            nodes += 1
            if budget and nodes > budget:
                return 2, nodes, sols
            cur = levels + (depth + 1) * n
            memcpy(cur, levels + depth * n, n * sizeof(dom_t))
            cur[vars_[depth]] = low
            memset(inq, 0, n + 1)
            q[0] = vars_[depth]
            with nogil:
                ok = _propagate(cur, n, q, 1, inq, arc_ptr, arc_x, arc_rel, sup,
                                t_ptr, t_ids, tvars, ttab)
            if not ok:
                continue
            w = _select(cur, order, n)
            if w < 0:
                sols.append(_decode(cur, n))
                if limit and len(sols) >= limit:
                    return 1, nodes, sols
                continue
            depth += 1
            vars_[depth] = w
            masks[depth] = cur[w]
        return 0, nodes, sols
    finally:
        free(levels)
        free(vars_)
        free(masks)
        free(q)
        free(inq)


def fixpoint(dom0, const int[:] arc_ptr, const int[:] arc_x, const int[:] arc_rel,
             const dom_t[:] sup, const int[:] t_ptr, const int[:] t_ids,
             const int[:] tvars, const dom_t[:] ttab, queue=None):
    cdef int n = len(dom0)
    cdef int i, ok, qn
    cdef dom_t* D = <dom_t*> malloc(max(n, 1) * sizeof(dom_t))
    cdef int* q = <int*> malloc((n + 1) * sizeof(int))
    cdef char* inq = <char*> malloc(n + 1)
    try:
        ok = 1
        for i in range(n):
            D[i] = dom0[i]
            if D[i] == 0:
                ok = 0
        memset(inq, 0, n + 1)
        if queue is None:
            qn = n
            for i in range(n):
                q[i] = i
        else:
            qn = 0
            for v in set(queue):
                q[qn] = v
                qn += 1
        if ok:
            ok = _propagate(D, n, q, qn, inq, arc_ptr, arc_x, arc_rel, sup,
                            t_ptr, t_ids, tvars, ttab)
        return bool(ok), [D[i] for i in range(n)]
    finally:
        free(D)
        free(q)
        free(inq)
