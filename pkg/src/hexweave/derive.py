"""Exhaustive derivation of the decoration artifact.

1. Enumerate candidate base decorations: 64 edge-bit patterns x 15 perfect
   matchings x 12 vertex colourings, keeping structurally valid ones.
2. For each, enumerate composition tables (frame, pBS, pRB) -> state: every
   frame picks a stripe axis and a diameter axis, and each bit picks the
   orientation class with matching or opposite index parity.  Keep tables
   whose off-spoke closed form passes R1/R2/R3.
3. Find, for both published s vectors, the central states for which the full
   radius-16 patch is clean.
4. Group survivors by the physical markings they produce (labelling of the
   base state and a global Red/Blue exchange are the declared symmetries) and
   pick the canonical labelling: the s1 centre at rotation 0, then the
   lexicographically smallest base.
5. Search the hexagon mapping: one state per letter, barred letters by the
   vertical mirror, such that inflated substitution patches are clean.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .artifact import DEFAULT_PLACEMENTS, LETTERS, Artifact, ArtifactError
from .lattice import (
    ALL_STATES, VMIRROR, Decoration, DecorationError, DecorationTable, TileState,
    corner_aliases, disk, neighbor, rotate, second_neighbor, transform, position, SQRT3,
)

RADIUS = 16


class DeriveError(RuntimeError):
    pass


def perfect_matchings(items=tuple(range(6))):
    items = list(items)
    if not items:
        yield ()
        return
    a = items[0]
    for i in range(1, len(items)):
        b = items[i]
        rest = items[1:i] + items[i + 1:]
        for m in perfect_matchings(rest):
            yield ((a, b),) + m


def colourings():
    out = []
    for kinds in itertools.permutations(("RR", "BB", "RB")):
        for flip in (False, True):
            cols = [0] * 6
            for v, kd in enumerate(kinds):
                if kd == "RR":
                    cols[v] = cols[v + 3] = 0
                elif kd == "BB":
                    cols[v] = cols[v + 3] = 1
                else:
                    cols[v], cols[v + 3] = (1, 0) if flip else (0, 1)
            out.append(tuple(cols))
    return out


def candidate_decorations():
    """(total candidates examined, structurally valid decorations)."""
    total, valid = 0, []
    cols_all = colourings()
    for bits in itertools.product((0, 1), repeat=6):
        for m in perfect_matchings():
            for cols in cols_all:
                total += 1
                d = Decoration(bits, m, cols)
                try:
                    d.check()
                    DecorationTable(d)
                except DecorationError:
                    continue
                valid.append(d)
    return total, valid


def _crt(m3, m2):
    for o in range(6):
        if o % 3 == m3 and o % 2 == m2:
            return o
    raise AssertionError


def composition_tables(table: DecorationTable):
    """All total (frame, pBS, pRB) -> state tables for one decoration."""
    by_class = {}
    for s in ALL_STATES:
        d = table[s]
        by_class[(d.stripe_class(), d.diameter_class())] = s
    out = []
    for sax in itertools.permutations(range(3)):
        for rax in itertools.permutations(range(3)):
            for cs in (0, 1):
                for cr in (0, 1):
                    comp = {}
                    for n in (1, 2, 3):
                        for x in (0, 1):
                            for y in (0, 1):
                                key = (_crt(sax[n - 1], (x + cs) % 2), _crt(rax[n - 1], (y + cr) % 2))
                                if key in by_class:
                                    comp[(n, x, y)] = by_class[key]
                    if len(comp) == 12 and len(set(comp.values())) == 12:
                        out.append(comp)
    return out


class Checker:
    """Early-exit rule checker over a dict of states (optionally corrupted)."""

    def __init__(self, table: DecorationTable, corrupt: str | None = None):
        self.t = table
        self.corrupt = (corrupt or "").upper()

    def r1(self, s, t, k):
        ok = self.t.r1_ok(s, t, k)
        return not ok if self.corrupt == "R1" else ok

    def r2(self, s, t, c):
        ok = self.t.r2_ok(s, t, c)
        return not ok if self.corrupt == "R2" else ok

    def r3(self, s, cs, t, ct, u, cu):
        cols = self.t.cols
        ok = not (cols[s][cs] == cols[t][ct] == cols[u][cu])
        return not ok if self.corrupt == "R3" else ok

    def clean(self, cells: dict) -> bool:
        for p, s in cells.items():
            si = s.index
            for k in range(3):
                q = cells.get(neighbor(p, k))
                if q is not None and not self.r1(si, q.index, k):
                    return False
                w = cells.get(second_neighbor(p, k))
                if w is not None and not self.r2(si, w.index, k):
                    return False
            for c in (0, 1):
                (_, c0), (q1, c1), (q2, c2) = corner_aliases(p, c)
                a, b = cells.get(q1), cells.get(q2)
                if a is not None and b is not None and not self.r3(si, c0, a.index, c1, b.index, c2):
                    return False
        return True


def _off_spoke_sites(radius):
    from .cht import frame_of
    out = []
    for p in disk(radius):
        if p == (0, 0):
            continue
        f = frame_of(p)
        if abs(f.i) != abs(f.j):
            out.append(p)
    return out


def _physical(art: Artifact, swap=False):
    t = art.table

    def f(d):
        return d.colour_swapped() if swap else d
    return (frozenset(f(d) for d in t.decs),
            tuple(f(t[art.compose[k]]) for k in sorted(art.compose)),
            tuple(f(t[art.centers[c]]) for c in sorted(art.centers)))


def equivalence_key(art: Artifact):
    """Survivors are equivalent when they draw the same markings after
    relabelling the states and optionally exchanging Red and Blue globally
    (all three rules are invariant under the exchange)."""
    return frozenset((_physical(art), _physical(art, True)))


@dataclass
class Survivor:
    art: Artifact
    centers: dict = field(default_factory=dict)   # s choice -> list of valid centres


@dataclass
class DeriveReport:
    examined: int = 0
    structural: int = 0
    tables: int = 0
    off_spoke: int = 0
    survivors: list = field(default_factory=list)
    classes: int = 0
    hexmap_solutions: int = 0
    placement_ok: bool = False
    artifact: Artifact | None = None
    log: list = field(default_factory=list)


def _cht_cells(radius, cfg, art):
    from .cht import cht_state
    return {p: cht_state(p, cfg, art) for p in disk(radius)}


def derive(radius: int = RADIUS, corrupt: str | None = None, hex_steps=5, log=print) -> DeriveReport:
    from .cht import ChtConfig, classes_at
    rep = DeriveReport()
    rep.examined, decs = candidate_decorations()
    rep.structural = len(decs)
    log(f"candidates examined: {rep.examined}; structurally valid: {rep.structural}")
    probe = _off_spoke_sites(8)
    wide = _off_spoke_sites(radius)
    probe_keys = {p: classes_at(p, ChtConfig()) for p in wide}
    stage2 = []
    for d in decs:
        table = DecorationTable(d)
        chk = Checker(table, corrupt)
        for comp in composition_tables(table):
            rep.tables += 1
            cells = {p: comp[probe_keys[p]] for p in probe}
            if not chk.clean(cells):
                continue
            cells = {p: comp[probe_keys[p]] for p in wide}
            if chk.clean(cells):
                stage2.append((d, comp))
    rep.off_spoke = len(stage2)
    log(f"composition tables tried: {rep.tables}; clean off the spokes: {rep.off_spoke}")
    for d, comp in stage2:
        try:
            art = Artifact(d, comp)
        except ArtifactError:
            continue
        chk = Checker(art.table, corrupt)
        centers = {}
        for sc in (1, 2):
            centers[sc] = [c for c in ALL_STATES
                           if chk.clean(_cht_cells(radius, ChtConfig(sc, c), art))]
        if all(len(v) == 1 for v in centers.values()):
            art = Artifact(d, comp, {sc: v[0] for sc, v in centers.items()})
            rep.survivors.append(Survivor(art, centers))
        elif any(centers.values()):
            rep.log.append(f"partial spoke fit for {d.text_fields()}: {centers}")
    groups = {}
    for s in rep.survivors:
        groups.setdefault(equivalence_key(s.art), []).append(s)
    rep.classes = len(groups)
    log(f"full-patch survivors: {len(rep.survivors)} in {rep.classes} class(es) up to relabelling")
    if rep.classes != 1:
        return rep
    members = next(iter(groups.values()))
    pick = [s for s in members if s.art.centers[1].rot == 0]
    if not pick:
        raise DeriveError("no labelling puts the s1 centre at rotation 0")
    pick.sort(key=lambda s: (s.art.base.sort_key(), sorted((k, v.index) for k, v in s.art.compose.items())))
    chosen = pick[0].art
    rep.placement_ok = placements_tile_exactly(DEFAULT_PLACEMENTS)
    if not rep.placement_ok:
        raise DeriveError("child placements do not tile the doubled half-hexagon")
    sols = hexmap_search(chosen, hex_steps, corrupt)
    rep.hexmap_solutions = len(sols)
    log(f"hexagon mappings: {len(sols)}")
    if len(sols) != 1:
        return rep
    rep.artifact = Artifact(chosen.base, chosen.compose, chosen.centers, sols[0],
                            dict(DEFAULT_PLACEMENTS))
    return rep


def hexmap_search(art: Artifact, steps=5, corrupt=None) -> list[dict]:
    from .substitution import Symbol, inflate, seed, to_hexagons
    patches = []
    for sym, k in ((Symbol("A", "L"), steps), (Symbol("D", "R", True), steps - 1),
                   (Symbol("C", "L"), steps - 1)):
        patches.append(to_hexagons(inflate(seed(sym), k, art)))
    chk = Checker(art.table, corrupt)

    def states(mp):
        out = []
        for hx in patches:
            cells = {}
            for h, c in hx.items():
                if c.letter in mp:
                    base = mp[c.letter]
                    if c.barred:
                        base = transform(base, VMIRROR)
                    cells[h] = rotate(base, c.orientation)
            out.append(cells)
        return out

    sols = []

    def rec(i, mp):
        if i == len(LETTERS):
            sols.append(dict(mp))
            return
        for s in ALL_STATES:
            mp[LETTERS[i]] = s
            if all(chk.clean(c) for c in states(mp)):
                rec(i + 1, mp)
            del mp[LETTERS[i]]

    rec(0, {})
    out = []
    for mp in sols:
        full = {}
        for x, s in mp.items():
            full[(x, False)] = s
            full[(x, True)] = transform(s, VMIRROR)
        out.append(full)
    return out


def _half_poly(center, u, scale=1.0):
    cx, cy = center
    r = scale / SQRT3
    pts = []
    for k in (u - 1, u, u + 1, u + 2):
        t = math.radians(60 * k - 30)
        pts.append((cx + r * math.cos(t), cy + r * math.sin(t)))
    return pts


def _inside(poly, q, eps=1e-9):
    sign = 0
    for i in range(len(poly)):
        (x1, y1), (x2, y2) = poly[i], poly[(i + 1) % len(poly)]
        cr = (x2 - x1) * (q[1] - y1) - (y2 - y1) * (q[0] - x1)
        if abs(cr) < eps:
            return None
        s = 1 if cr > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    return True


def placements_tile_exactly(placements, grid=41) -> bool:
    """Children of every half-hexagon tile its doubled image: each sample point
    of the doubled region lies in exactly one child."""
    from .substitution import SIDES
    P = (1, 2)
    for half in ("L", "R"):
        for U in range(6):
            px, py = position(P)
            parent = _half_poly((2 * px, 2 * py), U, 2.0)
            kids = [(position((2 * P[0], 2 * P[1])), U)]
            for side in SIDES[half]:
                e = (U + placements[(half, side)]) % 6
                q = neighbor((2 * P[0], 2 * P[1]), e)
                kids.append((position(q), (e + 3) % 6))
            polys = [_half_poly(c, u) for c, u in kids]
            xs = [x for x, _ in parent]
            ys = [y for _, y in parent]
            for i in range(grid):
                for j in range(grid):
                    q = (min(xs) + (max(xs) - min(xs)) * (i + 0.5) / grid,
                         min(ys) + (max(ys) - min(ys)) * (j + 0.5) / grid)
                    ip = _inside(parent, q)
                    if ip is None:
                        continue
                    hits = [_inside(pp, q) for pp in polys]
                    if None in hits:
                        continue
                    if (sum(bool(h) for h in hits) == 1) != ip:
                        return False
    return True
