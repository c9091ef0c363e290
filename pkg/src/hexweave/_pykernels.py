"""Pure-Python propagation and search kernels.

Same algorithm and signatures as the compiled ``_ckernels`` module; used
when the extension is unavailable or HEXWEAVE_PURE=1.

Domains are 12-bit masks.  Binary arcs are stored per variable y as
(x, rel) pairs: after D[y] changes, D[x] &= sup[rel * 4096 + D[y]].
Ternary constraint c has variables tvars[3c:3c+3] and a table
ttab[144c + 12s + t] giving the allowed third values for (s, t).
"""

BACKEND = "python"


def _revise_ternary(D, c, tvars, ttab):
    x, y, z = tvars[3 * c], tvars[3 * c + 1], tvars[3 * c + 2]
    dx, dy, dz = D[x], D[y], D[z]
    nx = ny = nz = 0
    base = 144 * c
    s = 0
    mx = dx
    while mx:
        if mx & 1:
            row = base + 12 * s
            t = 0
            my = dy
            while my:
                if my & 1:
                    m = ttab[row + t] & dz
                    if m:
                        nz |= m
                        nx |= 1 << s
                        ny |= 1 << t
                my >>= 1
                t += 1
        mx >>= 1
        s += 1
    return x, nx, y, ny, z, nz


def propagate(D, queue, arc_ptr, arc_x, arc_rel, sup, t_ptr, t_ids, tvars, ttab):
    """Arc consistency to fixpoint, in place.  Returns False on a wipe-out."""
    n = len(D)
    inq = [False] * n
    for v in queue:
        inq[v] = True
    q = list(queue)
    while q:
        y = q.pop()
        inq[y] = False
        dy = D[y]
        for idx in range(arc_ptr[y], arc_ptr[y + 1]):
            x = arc_x[idx]
            nd = D[x] & sup[(arc_rel[idx] << 12) | dy]
            if nd != D[x]:
                if not nd:
                    return False
                D[x] = nd
                if not inq[x]:
                    inq[x] = True
                    q.append(x)
        for idx in range(t_ptr[y], t_ptr[y + 1]):
            res = _revise_ternary(D, t_ids[idx], tvars, ttab)
            for j in range(0, 6, 2):
                v, nd = res[j], res[j + 1] & D[res[j]]
                if nd != D[v]:
                    if not nd:
                        return False
                    D[v] = nd
                    if not inq[v]:
                        inq[v] = True
                        q.append(v)
    return True


def _select(D, order):
    for v in order:
        d = D[v]
        if d & (d - 1):
            return v
    return -1


def _decode(D):
    return tuple(d.bit_length() - 1 for d in D)


def solve(dom0, arc_ptr, arc_x, arc_rel, sup, t_ptr, t_ids, tvars, ttab, order,
          limit=0, budget=0):
    """Depth-first search with full propagation at every node.

    Returns (status, nodes, solutions): status 0 = exhausted, 1 = stopped at
    ``limit`` solutions, 2 = node budget exceeded.  Zero limit/budget means
    unbounded.
    """
    D = list(dom0)
    n = len(D)
    sols = []
    if any(d == 0 for d in D):
        return 0, 0, sols
    if not propagate(D, list(range(n)), arc_ptr, arc_x, arc_rel, sup, t_ptr, t_ids, tvars, ttab):
        return 0, 0, sols
    v = _select(D, order)
    if v < 0:
        sols.append(_decode(D))
        return (1 if limit and len(sols) >= limit else 0), 0, sols
    nodes = 0
    stack = [[D, v, D[v]]]
    while stack:
        top = stack[-1]
        mask = top[2]
        if not mask:
            stack.pop()
            continue
        low = mask & -mask
        top[2] = mask ^ low
        nodes += 1
        if budget and nodes > budget:
            return 2, nodes, sols
        D = list(top[0])
        v = top[1]
        D[v] = low
        if not propagate(D, [v], arc_ptr, arc_x, arc_rel, sup, t_ptr, t_ids, tvars, ttab):
            continue
        w = _select(D, order)
        if w < 0:
            sols.append(_decode(D))
            if limit and len(sols) >= limit:
                return 1, nodes, sols
            continue
        stack.append([D, w, D[w]])
    return 0, nodes, sols


def fixpoint(dom0, arc_ptr, arc_x, arc_rel, sup, t_ptr, t_ids, tvars, ttab, queue=None):
    D = list(dom0)
    if queue is None:
        queue = range(len(D))
    ok = all(D) and propagate(D, list(queue), arc_ptr, arc_x, arc_rel, sup, t_ptr, t_ids, tvars, ttab)
    return ok, D
