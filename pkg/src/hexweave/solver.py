"""Constraint propagation and exhaustive search over tile-state domains.

R1 and R2 become binary constraints: R1 between edge neighbours, R2 between
the two witnesses of an edge (a pair of second neighbours).  R3 and ring
conditions are ternary constraints on the three tiles of a vertex.
"""
from __future__ import annotations

import time
from array import array
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable

from . import kernels
from .artifact import resolve
from .lattice import (
    ALL_STATES, DIRS, SYMMETRIES, HexCoord, Patch, TileState, Torus, corner_aliases,
    neighbor, second_neighbor, spiral, validate, disk,
)

FULL = (1 << 12) - 1


class Contradiction(Exception):
    pass


# -- relation tables --------------------------------------------------------

def _rel_r1(k):
    return k % 6


def _rel_r2(c):
    return 6 + c % 6


@lru_cache(maxsize=16)
def _compat(table):
    """compat[rel][s] = mask of partner states allowed with s."""
    out = []
    for k in range(6):
        out.append([sum(1 << t for t in range(12) if table.r1_ok(s, t, k)) for s in range(12)])
    for c in range(6):
        out.append([sum(1 << t for t in range(12) if table.r2_ok(s, t, c)) for s in range(12)])
    return out


@lru_cache(maxsize=16)
def support_table(table) -> array:
    """sup[rel << 12 | mask] = states with a partner in ``mask``."""
    comp = _compat(table)
    sup = array("H", [0]) * (12 * 4096)
    for rel in range(12):
        row = comp[rel]
        for mask in range(4096):
            v = 0
            for s in range(12):
                if row[s] & mask:
                    v |= 1 << s
            sup[(rel << 12) | mask] = v
    return sup


def vertex_table(pred: Callable, c: int, table) -> tuple:
    """Ternary table for the vertex at corner c of its first tile.

    pred receives the three (decoration index, corner) pairs in alias order.
    """
    c0, c1, c2 = c % 6, (c + 4) % 6, (c + 2) % 6
    tab = []
    for s in range(12):
        for t in range(12):
            m = 0
            for u in range(12):
                if pred(table, (s, c0), (t, c1), (u, c2)):
                    m |= 1 << u
            tab.append(m)
    return tuple(tab)


def _r3_pred(table, *tc):
    cols = [table.cols[s][c] for s, c in tc]
    return not (cols[0] == cols[1] == cols[2])


def _ring_pred(table, *tc):
    return all(c in table.arcs[s] for s, c in tc)


def _no_ring_pred(table, *tc):
    return not _ring_pred(table, *tc)


def _mono_pred(table, *tc):
    cols = [table.cols[s][c] for s, c in tc]
    return cols[0] == cols[1] == cols[2]


PREDICATES = {"R3": _r3_pred, "ring": _ring_pred, "no-ring": _no_ring_pred, "mono": _mono_pred}


# -- problems ---------------------------------------------------------------

@dataclass
class Problem:
    cells: list                      # variable order (spiral)
    torus: Torus | None = None
    rules: tuple = ("R1", "R2")
    domains: dict = field(default_factory=dict)     # coord -> mask
    binary: list = field(default_factory=list)      # (i, j, rel)
    ternary: list = field(default_factory=list)     # (i, j, k, tab)
    art: object = None

    def __post_init__(self):
        self.art = resolve(self.art)
        self.cells = [HexCoord(*p) for p in self.cells]
        self.index = {p: i for i, p in enumerate(self.cells)}
        for p in self.cells:
            self.domains.setdefault(p, FULL)

    # construction helpers
    def key(self, p):
        return self.torus.reduce(p) if self.torus is not None else HexCoord(*p)

    def var(self, p):
        return self.index.get(self.key(p))

    def pin(self, p, s: TileState):
        v = self.key(p)
        if v not in self.index:
            raise ValueError(f"pinned cell {tuple(p)} outside the region")
        self.domains[v] &= 1 << s.index
        return self

    def restrict(self, p, states: Iterable[TileState]):
        v = self.key(p)
        self.domains[v] &= sum(1 << s.index for s in states)
        return self

    def add_vertex(self, p, c: int, kind: str):
        names = corner_aliases(p, c)
        vs = [self.var(q) for q, _ in names]
        if any(v is None for v in vs):
            return False
        tab = vertex_table(PREDICATES[kind], c, self.art.table)
        self.ternary.append((vs[0], vs[1], vs[2], tab))
        return True

    def vertices(self):
        """Vertices whose three tiles all lie in the region (each once)."""
        out = []
        for p in self.cells:
            for c in (0, 1):
                if all(self.var(q) is not None for q, _ in corner_aliases(p, c)):
                    out.append((p, c))
        return out

    def compile(self):
        n = len(self.cells)
        table = self.art.table
        comp = _compat(table)
        dom = [self.domains[p] for p in self.cells]
        arcs = [[] for _ in range(n)]
        for i, j, rel in self.binary:
            if i == j:
                dom[i] &= sum(1 << s for s in range(12) if comp[rel][s] >> s & 1)
                continue
            conv = (rel + 3) % 6 if rel < 6 else 6 + (rel - 6 + 3) % 6
            arcs[j].append((i, rel))
            arcs[i].append((j, conv))
        arc_ptr, arc_x, arc_rel = array("i", [0]), array("i"), array("i")
        for lst in arcs:
            for x, r in lst:
                arc_x.append(x)
                arc_rel.append(r)
            arc_ptr.append(len(arc_x))
        tinc = [[] for _ in range(n)]
        tvars, ttab = array("i"), array("H")
        for cid, (i, j, k, tab) in enumerate(self.ternary):
            tvars.extend((i, j, k))
            ttab.extend(tab)
            for v in {i, j, k}:
                tinc[v].append(cid)
        t_ptr, t_ids = array("i", [0]), array("i")
        for lst in tinc:
            t_ids.extend(lst)
            t_ptr.append(len(t_ids))
        order = array("i", range(n))
        return (array("H", dom), arc_ptr, arc_x, arc_rel, support_table(table),
                t_ptr, t_ids, tvars, ttab, order)


def _add_rules(prob: Problem, rules):
    rules = {r.upper() for r in rules}
    for i, p in enumerate(prob.cells):
        for k in range(3):
            if "R1" in rules:
                j = prob.var(neighbor(p, k))
                if j is not None:
                    prob.binary.append((i, j, _rel_r1(k)))
            if "R2" in rules:
                j = prob.var(second_neighbor(p, k))
                if j is not None:
                    prob.binary.append((i, j, _rel_r2(k)))
    if "R3" in rules:
        for p, c in prob.vertices():
            prob.add_vertex(p, c, "R3")
    return prob


def region_problem(region, pins=None, rules=("R1", "R2"), art=None, center=(0, 0)) -> Problem:
    prob = Problem(spiral(set(HexCoord(*p) for p in region), center), None, tuple(rules), art=art)
    for p, s in (pins or {}).items():
        prob.pin(p, s)
    return _add_rules(prob, rules)


def torus_problem(torus: Torus, rules=("R1", "R2"), art=None) -> Problem:
    prob = Problem(torus.cells(), torus, tuple(rules), art=art)
    return _add_rules(prob, rules)


# -- outcomes ---------------------------------------------------------------

@dataclass
class SearchOutcome:
    kind: str                    # 'unsatisfiable', 'solutions', 'inconclusive', 'determined'
    solutions: list = field(default_factory=list)
    truncated: bool = False
    nodes: int = 0
    determined: dict | None = None
    millis: float = 0.0
    info: dict = field(default_factory=dict)

    @property
    def satisfiable(self):
        return bool(self.solutions) or (self.kind == "determined")


def _backend(backend):
    return kernels.get(backend)


def propagate(prob: Problem, backend=None) -> dict:
    """Largest arc-consistent fixpoint; raises Contradiction on a wipe-out."""
    args = prob.compile()
    ok, D = _backend(backend).fixpoint(*args[:9])
    if not ok:
        raise Contradiction("a domain became empty")
    return {p: D[i] for i, p in enumerate(prob.cells)}


def enumerate_solutions(prob: Problem, limit: int | None = None, budget: int | None = None,
                        backend=None) -> SearchOutcome:
    t0 = time.perf_counter()
    args = prob.compile()
    status, nodes, sols = _backend(backend).solve(*args, limit or 0, budget or 0)
    ms = 1000 * (time.perf_counter() - t0)
    decoded = [{p: ALL_STATES[s[i]] for i, p in enumerate(prob.cells)} for s in sols]
    if status == 2:
        return SearchOutcome("inconclusive", decoded, True, nodes, millis=ms)
    if not decoded:
        return SearchOutcome("unsatisfiable", [], False, nodes, millis=ms)
    return SearchOutcome("solutions", decoded, status == 1, nodes, millis=ms)


def satisfiable(prob: Problem, budget=None, backend=None) -> bool | None:
    out = enumerate_solutions(prob, limit=1, budget=budget, backend=backend)
    if out.kind == "inconclusive":
        return None
    return out.kind == "solutions"


def determined(prob: Problem, query: Iterable, backend=None) -> SearchOutcome:
    """Whether every solution agrees on the ``query`` cells.

    Uses one witness solution and refutes every alternative value cell by
    cell, so no enumeration of the (possibly huge) solution set is needed.
    """
    t0 = time.perf_counter()
    first = enumerate_solutions(prob, limit=1, backend=backend)
    nodes = first.nodes
    if not first.solutions:
        return SearchOutcome("unsatisfiable", nodes=nodes)
    sol = first.solutions[0]
    try:
        fix = propagate(prob, backend)
    except Contradiction:
        return SearchOutcome("unsatisfiable", nodes=nodes)
    forced, searched, alternatives = {}, 0, {}
    for q in query:
        q = prob.key(q)
        d = fix[q]
        own = sol[q]
        alts = []
        for s in ALL_STATES:
            if s == own or not (d >> s.index) & 1:
                continue
            saved = prob.domains[q]
            prob.domains[q] = 1 << s.index
            try:
                out = enumerate_solutions(prob, limit=1, backend=backend)
            finally:
                prob.domains[q] = saved
            searched += 1
            nodes += out.nodes
            if out.solutions:
                alts.append(s)
        if alts:
            alternatives[q] = alts
        else:
            forced[q] = own
    ms = 1000 * (time.perf_counter() - t0)
    info = {"searches": searched, "propagation_only": sum(
        1 for q in forced if fix[q] & (fix[q] - 1) == 0), "alternatives": alternatives}
    if alternatives:
        return SearchOutcome("solutions", [sol], True, nodes, None, ms, info)
    return SearchOutcome("determined", [sol], False, nodes, forced, ms, info)


def check_solution(prob: Problem, sol: dict):
    return validate(Patch(sol, prob.torus), prob.rules, prob.art.table)


# -- torus refutation -------------------------------------------------------

def hnf_bases(index: int) -> list[Torus]:
    out = []
    for a in range(1, index + 1):
        if index % a:
            continue
        d = index // a
        for b in range(a):
            out.append(Torus(a, b, d))
    return out


def _egcd(x, y):
    if y == 0:
        return (1 if x >= 0 else -1), 0, abs(x)
    u, v, g = _egcd(y, x % y)
    return v, u - (x // y) * v, g


def hnf_of(v1, v2) -> Torus:
    """Hermite form of the lattice generated by two integer vectors."""
    det = abs(v1[0] * v2[1] - v1[1] * v2[0])
    if det == 0:
        raise ValueError("singular basis")
    alpha, beta, d = _egcd(v1[1], v2[1])
    if d == 0:
        raise ValueError("singular basis")
    a = det // d
    wx = alpha * v1[0] + beta * v2[0]
    return Torus(a, wx % a, d)


def canonical_torus(t: Torus) -> Torus:
    (x1, y1), (x2, y2) = t.basis()
    best = None
    for g in SYMMETRIES:
        h = hnf_of(g.point((x1, y1)), g.point((x2, y2)))
        if best is None or tuple(h) < tuple(best):
            best = h
    return best


def sublattices(max_area: int, dedupe=True) -> list[Torus]:
    out = []
    for n in range(1, max_area + 1):
        seen = set()
        for t in hnf_bases(n):
            c = canonical_torus(t) if dedupe else t
            if c not in seen:
                seen.add(c)
                out.append(c)
    return out


@dataclass
class TorusRecord:
    basis: tuple
    index: int
    verdict: str        # 'unsatisfiable', 'satisfiable', 'inconclusive'
    nodes: int
    millis: float
    solution: dict | None = None

    def as_dict(self):
        d = {"basis": [list(v) for v in self.basis], "index": self.index,
             "verdict": self.verdict, "nodes": self.nodes, "millis": round(self.millis, 3)}
        if self.solution is not None:
            d["counterexample"] = [[p[0], p[1], s.rot, s.chi] for p, s in sorted(self.solution.items())]
        return d


def refute_one(t: Torus, budget: int = 10 ** 8, art=None, backend=None) -> TorusRecord:
    prob = torus_problem(t, ("R1", "R2"), art)
    out = enumerate_solutions(prob, limit=1, budget=budget, backend=backend)
    verdict = {"unsatisfiable": "unsatisfiable", "solutions": "satisfiable",
               "inconclusive": "inconclusive"}[out.kind]
    sol = out.solutions[0] if out.solutions else None
    return TorusRecord(t.basis(), t.index, verdict, out.nodes, out.millis, sol)


def _refute_job(args):
    t, budget, path = args
    from .artifact import load
    art = load(path) if path else None
    return refute_one(Torus(*t), budget, art)


def refute_torus(max_area: int, budget: int = 10 ** 8, art=None, jobs: int = 1,
                 art_path: str | None = None, backend=None) -> list[TorusRecord]:
    if max_area < 1:
        raise ValueError("max_area must be >= 1")
    tori = sublattices(max_area)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(_refute_job, [(tuple(t), budget, art_path) for t in tori]))
    return [refute_one(t, budget, art, backend) for t in tori]


# -- forcing lemmas ---------------------------------------------------------

def ring_free_problem(radius: int = 3, art=None) -> Problem:
    prob = region_problem(disk(radius), rules=("R1", "R2"), art=art)
    for p, c in prob.vertices():
        prob.add_vertex(p, c, "no-ring")
    return prob


def pinned_ring_problem(radius: int = 3, art=None, forbid_opposite=False) -> Problem:
    prob = region_problem(disk(radius), rules=("R1", "R2"), art=art)
    prob.add_vertex((0, 0), 0, "ring")
    if forbid_opposite:
        prob.add_vertex((0, 0), 3, "no-ring")
    return prob


def has_ring(sol: dict, p, c: int, art=None) -> bool:
    table = resolve(art).table
    for q, cq in corner_aliases(p, c):
        s = sol.get(HexCoord(*q))
        if s is None or cq not in table.arcs[s.index]:
            return False
    return True


def verify_ring_forcing(radius: int = 3, sample: int = 200, art=None, backend=None) -> dict:
    """(a) a ring-free disk is unsatisfiable; (b) a ring at corner 0 of the
    central tile forces one at corner 3."""
    art = resolve(art)
    a = enumerate_solutions(ring_free_problem(radius, art), limit=1, backend=backend)
    b_ref = enumerate_solutions(pinned_ring_problem(radius, art, True), limit=1, backend=backend)
    b_enum = enumerate_solutions(pinned_ring_problem(radius, art), limit=sample, backend=backend)
    with_ring = sum(1 for s in b_enum.solutions if has_ring(s, (0, 0), 3, art))
    return {
        "radius": radius,
        "ring_free": a.kind, "ring_free_nodes": a.nodes,
        "opposite_forced": b_ref.kind == "unsatisfiable", "opposite_nodes": b_ref.nodes,
        "enumerated": len(b_enum.solutions), "truncated": b_enum.truncated,
        "with_opposite_ring": with_ring,
        "ok": a.kind == "unsatisfiable" and b_ref.kind == "unsatisfiable"
        and with_ring == len(b_enum.solutions) and len(b_enum.solutions) > 0,
    }


# -- defect -----------------------------------------------------------------

def defect_seeds(art=None) -> list[dict]:
    """Three tiles around corner 0 of (0, 0) with pairwise R1 and one colour."""
    art = resolve(art)
    table = art.table
    names = corner_aliases((0, 0), 0)
    (p0, c0), (p1, c1), (p2, c2) = names
    out = []
    for s in ALL_STATES:
        for t in ALL_STATES:
            for u in ALL_STATES:
                cols = {table.cols[s.index][c0], table.cols[t.index][c1], table.cols[u.index][c2]}
                if len(cols) != 1:
                    continue
                cells = {p0: s, p1: t, p2: u}
                rep = validate(Patch(cells), ("R1", "R2"), table)
                if rep.clean:
                    out.append(cells)
    return out


def seed_class(cells: dict) -> tuple:
    """Canonical form of a seed under the 12 symmetries fixing the lattice vertex
    set of corner-0 of the origin (as a configuration up to congruence)."""
    return canonical_config(cells)


def canonical_config(cells: dict) -> tuple:
    best = None
    items = [(HexCoord(*p), s) for p, s in cells.items()]
    for g in SYMMETRIES:
        from .lattice import transform
        img = sorted((tuple(g.point(p)), transform(s, g).index) for p, s in items)
        a0, b0 = min(p for p, _ in img)
        img = tuple(((p[0] - a0, p[1] - b0), s) for p, s in img)
        if best is None or img < best:
            best = img
    return best


def grow_defect(radius: int = 4, seed: dict | None = None, art=None, backend=None,
                pin_seed: bool = True, inner: int | None = None) -> SearchOutcome:
    """Complete a disk around the monochrome-vertex seed and ask whether all
    completions agree on the inner disk (default radius - 2)."""
    art = resolve(art)
    if seed is None:
        seed = select_defect_seed(radius, art, backend)
    inner = max(radius - 2, 0) if inner is None else inner
    prob = region_problem(disk(radius), seed if pin_seed else None, ("R1", "R2"), art)
    out = determined(prob, disk(inner), backend)
    out.info["radius"], out.info["inner"] = radius, inner
    out.info["search_required"] = out.info["propagation_only"] < len(list(disk(inner)))
    out.info["seed"] = {tuple(p): str(s) for p, s in seed.items()}
    return out


def select_defect_seed(radius: int = 4, art=None, backend=None) -> dict:
    """First seed (in class order) that extends to the radius-``radius`` disk."""
    for s in extendable_seeds(radius, art, backend):
        return s
    raise Contradiction("no monochrome-vertex seed extends")


def extendable_seeds(radius: int = 4, art=None, backend=None) -> list[dict]:
    art = resolve(art)
    classes = {}
    for cells in defect_seeds(art):
        classes.setdefault(canonical_config(cells), cells)
    out = []
    for key in sorted(classes):
        cells = classes[key]
        prob = region_problem(disk(radius), cells, ("R1", "R2"), art)
        if satisfiable(prob, backend=backend):
            out.append(cells)
    return out


# -- uniformity -------------------------------------------------------------

def window_config(patch: Patch, c, r: int):
    cells = {}
    for q in disk(r, c):
        s = patch.at(q)
        if s is None:
            return None
        cells[(q[0] - c[0], q[1] - c[1])] = s
    return cells


def canonical_window(cells: dict) -> tuple:
    """Canonical form of a centred window under the 12 point symmetries."""
    from .lattice import transform
    best = None
    for g in SYMMETRIES:
        img = tuple(sorted((tuple(g.point(p)), transform(s, g).index) for p, s in cells.items()))
        if best is None or img < best:
            best = img
    return best


def uniformity_check(patch: Patch, r: int = 2, min_count: int = 3, inner=None) -> dict:
    from .lattice import hex_distance
    R = max((hex_distance(p) for p in patch.cells), default=0)
    inner = R // 2 if inner is None else inner
    counts, inner_set = {}, set()
    for c in patch.cells:
        w = window_config(patch, c, r)
        if w is None:
            continue
        key = canonical_window(w)
        counts[key] = counts.get(key, 0) + 1
        if hex_distance(c) <= inner:
            inner_set.add(key)
    low = sorted(counts[k] for k in inner_set)
    rare = [k for k in inner_set if counts[k] < min_count]
    return {"r": r, "classes": len(inner_set), "all_classes": len(counts),
            "min_count": low[0] if low else 0, "rare": len(rare), "ok": not rare}
