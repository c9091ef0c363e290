"""Parity-pattern analytics: islands and llamas, spoke paperfolding, and the
one-third sublattice (Pee) extraction.

Bitmap convention (``field_to_pbm``): plain PBM (P1), one pixel per site.
Column x = a - a_min, row y = b - b_min (row 0 is the smallest b), so the
lattice basis is sheared into the square grid.  Pixel 1 = parity 1, sites
missing from the patch are written as 0.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .artifact import resolve
from .cht import ChtConfig, parity_at, ray_point
from .lattice import (
    HexCoord, Patch, check_r2, disk, hex_distance, neighbor, parity_of, r2_witnesses,
)


class AnalysisError(ValueError):
    pass


# -- parity field -----------------------------------------------------------

def parity_field(patch: Patch, art=None, cfg: ChtConfig | None = None) -> dict:
    """Pointwise parity.  With ``cfg`` the field is also checked against the
    closed form and an AnalysisError lists any mismatch."""
    art = resolve(art)
    out = {HexCoord(*p): parity_of(s, art) for p, s in patch.cells.items()}
    if cfg is not None:
        bad = [p for p, v in out.items() if parity_at(p, cfg, art) != v]
        if bad:
            raise AnalysisError(f"{len(bad)} sites disagree with the closed form, first {tuple(bad[0])}")
    return out


def field_to_pbm(fld: dict) -> str:
    if not fld:
        return "P1\n# hexweave parity: empty\n0 0\n"
    a0 = min(p[0] for p in fld)
    a1 = max(p[0] for p in fld)
    b0 = min(p[1] for p in fld)
    b1 = max(p[1] for p in fld)
    lines = ["P1", f"# hexweave parity: x = a - ({a0}), y = b - ({b0}), missing = 0",
             f"{a1 - a0 + 1} {b1 - b0 + 1}"]
    for b in range(b0, b1 + 1):
        lines.append(" ".join(str(fld.get((a, b), 0)) for a in range(a0, a1 + 1)))
    return "\n".join(lines) + "\n"


# -- islands ----------------------------------------------------------------

@dataclass
class Island:
    parity: int
    cells: frozenset
    interior: bool

    @property
    def size(self):
        return len(self.cells)

    def anchor(self):
        return min(self.cells)


@dataclass
class IslandCensus:
    islands: list = field(default_factory=list)

    def sizes(self, interior_only=True) -> Counter:
        return Counter(i.size for i in self.islands if i.interior or not interior_only)

    def llamas(self) -> list:
        return [i for i in self.islands if i.interior and i.size == 13]

    def as_dict(self):
        return {"components": len(self.islands),
                "interior_sizes": dict(sorted(self.sizes().items())),
                "llamas": len(self.llamas())}


def component(fld, p, cap: int | None = None):
    """Edge-connected constant-parity component of p; None if larger than cap.

    ``fld`` is a dict or a callable site -> bit (None for sites outside)."""
    get = fld if callable(fld) else fld.get
    p = HexCoord(*p)
    v = get(p)
    if v is None:
        raise AnalysisError(f"site {tuple(p)} is outside the field")
    seen, stack = {p}, [p]
    while stack:
        x = stack.pop()
        for k in range(6):
            y = neighbor(x, k)
            if y not in seen and get(y) == v:
                seen.add(y)
                stack.append(y)
                if cap is not None and len(seen) > cap:
                    return None
    return frozenset(seen)


def _touches_outside(cells, fld) -> bool:
    get = fld if callable(fld) else fld.get
    return any(get(neighbor(x, k)) is None for x in cells for k in range(6))


def islands(fld: dict) -> IslandCensus:
    """All constant-parity components (edge adjacency), sorted by anchor.
    An island is interior when every neighbour of it lies in the field."""
    seen = set()
    out = []
    for p in sorted(fld):
        if p in seen:
            continue
        comp = component(fld, p)
        seen |= comp
        out.append(Island(fld[p], comp, not _touches_outside(comp, fld)))
    out.sort(key=lambda i: i.anchor())
    return IslandCensus(out)


def surrounded(island: Island, fld) -> bool:
    """Every neighbour outside the island has the opposite parity."""
    get = fld if callable(fld) else fld.get
    for x in island.cells:
        for k in range(6):
            y = neighbor(x, k)
            if y not in island.cells and get(y) != 1 - island.parity:
                return False
    return True


def enclosed_islands(container, fld, max_size: int = 64) -> list:
    """Islands lying in holes of ``container``: components whose whole outer
    boundary belongs to the container."""
    get = fld if callable(fld) else fld.get
    cset = set(container)
    out, seen = [], set()
    for x in sorted(cset):
        for k in range(6):
            y = neighbor(x, k)
            if y in cset or y in seen or get(y) is None:
                continue
            comp = component(fld, y, max_size)
            if comp is None:
                continue
            seen |= comp
            if all(neighbor(z, j) in comp or neighbor(z, j) in cset
                   for z in comp for j in range(6)):
                out.append(comp)
    return sorted(out, key=min)


class ChtField:
    """Lazy parity field of the infinite CHT (closed form, memoised)."""

    def __init__(self, cfg: ChtConfig = ChtConfig(), art=None):
        self.cfg = cfg
        self.art = resolve(art)
        self._memo = {}

    def __call__(self, p):
        p = HexCoord(*p)
        v = self._memo.get(p)
        if v is None:
            v = self._memo[p] = parity_at(p, self.cfg, self.art)
        return v


@dataclass
class InflationStep:
    size: int
    hits: dict            # size of every component hit -> number of images in it
    cells: frozenset
    enclosed: list        # sizes of islands inside holes of the inflated island


def inflate_island_cht(cells, steps: int = 2, cfg: ChtConfig = ChtConfig(), art=None,
                       cap: int = 20000) -> list[InflationStep]:
    """Inflate an island through the CHT scale-2 self-similarity.

    The sites of the island are doubled; the inflated island is the largest
    constant-parity component of the CHT field hit by the images.
    """
    fld = ChtField(cfg, art)
    cur = frozenset(HexCoord(*p) for p in cells)
    out = []
    for _ in range(steps):
        comps, hits = {}, Counter()
        for q in cur:
            img = (2 * q[0], 2 * q[1])
            hit = next((c for c in comps.values() if img in c), None)
            if hit is None:
                hit = component(fld, img, cap)
                if hit is None:
                    raise AnalysisError(f"component of {img} exceeds {cap} sites")
                comps[min(hit)] = hit
            hits[min(hit)] += 1
        big = max(comps.values(), key=lambda c: (len(c), min(c)))
        sizes = Counter()
        for k, n in hits.items():
            sizes[len(comps[k])] += n
        enc = [len(c) for c in enclosed_islands(big, fld)]
        out.append(InflationStep(len(big), dict(sorted(sizes.items(), reverse=True)), big, enc))
        cur = big
    return out


def cht_llamas(radius: int = 64, cfg: ChtConfig = ChtConfig(), art=None) -> list:
    """Size-13 interior islands of the radius-``radius`` CHT patch."""
    from .cht import build_patch
    patch = build_patch(radius, cfg, art)
    return islands(parity_field(patch, art)).llamas()


def inflate_island_substitution(steps_before: int = 7, seed_symbol: str = "A_L", art=None,
                                which: int = 0, levels: int = 2) -> list[int]:
    """Cross-check through the half-hexagon substitution: find llamas in an
    inflated patch, inflate the patch further and follow the island."""
    from .substitution import Symbol, hexagons_to_patch, inflate, seed, to_hexagons
    art = resolve(art)
    hh = inflate(seed(Symbol.parse(seed_symbol)), steps_before, art)
    fields = []
    for _ in range(levels + 1):
        fields.append(parity_field(hexagons_to_patch(to_hexagons(hh), art), art))
        hh = inflate(hh, 1, art)
    ll = islands(fields[0]).llamas()
    if not ll:
        raise AnalysisError("no llama in the seed patch")
    cur = ll[which].cells
    sizes = []
    for lvl in range(1, levels + 1):
        f = fields[lvl]
        comps = {}
        for q in cur:
            img = HexCoord(2 * q[0], 2 * q[1])
            if img not in f:
                continue
            if not any(img in c for c in comps.values()):
                c = component(f, img)
                comps[min(c)] = c
        cur = max(comps.values(), key=lambda c: (len(c), min(c)))
        sizes.append(len(cur))
    return sizes


# -- paperfolding -----------------------------------------------------------

def paperfolding(length: int) -> list[int]:
    """Regular paperfolding sequence 1101100111001001... by fold insertion:
    double the positions and fill the gaps with alternating 1, 0."""
    if length < 1:
        raise ValueError("length must be >= 1")
    seq = [1]
    while len(seq) < length:
        nxt = []
        for i, x in enumerate(seq):
            nxt.append((i + 1) % 2)
            nxt.append(x)
        nxt.append(len(seq) % 2 ^ 1)
        seq = nxt
    return seq[:length]


def spoke_sequence(cfg: ChtConfig, ray: int, length: int, art=None) -> list[int]:
    if length < 1:
        raise ValueError("length must be >= 1")
    if not 0 <= ray < 12:
        raise ValueError("ray index must be 0..11")
    art = resolve(art)
    return [parity_at(ray_point(ray, d), cfg, art) for d in range(1, length + 1)]


def bits(seq) -> str:
    return "".join(str(b) for b in seq)


def spoke_report(cfg: ChtConfig, length: int = 64, art=None) -> list[dict]:
    pf = paperfolding(length)
    comp = [1 - b for b in pf]
    out = []
    for ray in range(12):
        s = spoke_sequence(cfg, ray, length, art)
        out.append({"ray": ray, "bits": bits(s),
                    "match": "paperfolding" if s == pf else "complement" if s == comp else "none"})
    return out


# -- Pee extraction ---------------------------------------------------------

def coset_of(p) -> int:
    """Frame label 1..3 of the index-3 sublattice a + b = n - 1 (mod 3)."""
    return (p[0] + p[1]) % 3 + 1


def purple_mark(cols, c: int) -> int:
    """Purple-stripe mark on the big-cell edge facing corner c.  Edges c and
    c + 3 read the mark from opposite ends, hence the flip for c >= 3."""
    return cols[c] ^ (c >= 3)


@dataclass
class PeeEdge:
    cell: HexCoord     # big cell
    corner: int        # corner of ``cell`` facing the neighbouring big cell
    source: tuple      # (a, b, k) source edge whose R2 check reads the same pair
    continuous: bool | None


@dataclass
class PeePatch:
    n: int
    cells: dict                 # big-cell centre -> purple marks (6 bits)
    fillers: dict               # gap-filler site -> tuple of the three big cells meeting there
    edges: list

    def failures(self):
        return [e for e in self.edges if e.continuous is False]

    def as_dict(self):
        return {"n": self.n, "cells": len(self.cells), "fillers": len(self.fillers),
                "edges_checked": sum(e.continuous is not None for e in self.edges),
                "discontinuities": len(self.failures())}


def extract_pee(patch: Patch, n: int, art=None) -> PeePatch:
    if n not in (1, 2, 3):
        raise ValueError("sublattice n must be 1, 2 or 3")
    table = resolve(art).table
    big = {}
    for p, s in patch.cells.items():
        if coset_of(p) == n:
            cols = table.cols[s.index]
            big[HexCoord(*p)] = tuple(purple_mark(cols, c) for c in range(6))
    fillers = {}
    for p in patch.cells:
        if coset_of(p) != n:
            ring = tuple(sorted(q for q in (neighbor(p, k) for k in range(6)) if q in big))
            fillers[HexCoord(*p)] = ring
    edges = []
    for a, b, k in _patch_edge_sites(patch):
        (r, cr), (w, cw) = r2_witnesses((a, b), k)
        if coset_of(r) != n:
            continue
        # the pair (r, w) is a big-cell edge; r faces w through corner cr
        mr, mw = big.get(HexCoord(*r)), big.get(HexCoord(*w))
        verdict = None if mr is None or mw is None else mr[cr] == mw[cw]
        edges.append(PeeEdge(HexCoord(*r), cr, (a, b, k), verdict))
    edges.sort(key=lambda e: e.source)
    return PeePatch(n, big, fillers, edges)


def _patch_edge_sites(patch: Patch):
    """Each shared or boundary edge of the patch once, as (a, b, k)."""
    out = []
    for p in patch.cells:
        for k in range(6):
            q = neighbor(p, k)
            if k >= 3 and q in patch.cells:
                continue
            out.append((p[0], p[1], k))
    return out


def continuity_vs_r2(patch: Patch, art=None) -> dict:
    """Per-edge comparison of purple continuity (over all three extractions)
    against checkR2 on the source patch."""
    table = resolve(art).table
    r2 = {}
    for a, b, k in _patch_edge_sites(patch):
        v = check_r2(patch, (a, b), k, table)
        r2[(a, b, k)] = None if v == "unchecked" else v == "pass"
    per_n, mismatches, covered = {}, [], set()
    for n in (1, 2, 3):
        pee = extract_pee(patch, n, art)
        for e in pee.edges:
            covered.add(e.source)
            if e.continuous != r2.get(e.source):
                mismatches.append((n, e.source, e.continuous, r2.get(e.source)))
        per_n[n] = pee.as_dict()
    missing = sorted(s for s in r2 if s not in covered)
    return {"per_n": per_n, "edges": len(r2), "mismatches": mismatches, "uncovered": missing,
            "equivalent": not mismatches and not missing}


def same_pattern_different_pee(patch: Patch, art=None) -> dict:
    """Illustration only: the three extractions of one source patch differ as
    tilings yet each is continuous."""
    if patch.topology != "planar" or not patch.cells:
        raise AnalysisError("needs a nonempty planar patch")
    R = max(hex_distance(p) for p in patch.cells)
    if R < 16:
        raise AnalysisError("needs a patch of radius >= 16")
    pees = {n: extract_pee(patch, n, art) for n in (1, 2, 3)}
    sets = {n: frozenset(p.cells) for n, p in pees.items()}
    return {
        "note": "illustration only, not a proof that the tilings are not locally derivable",
        "extractions": {n: p.as_dict() for n, p in pees.items()},
        "pairwise_disjoint": all(not (sets[x] & sets[y]) for x, y in ((1, 2), (1, 3), (2, 3))),
        "all_continuous": all(not p.failures() for p in pees.values()),
    }


def frame_sublattice_sizes(radius: int) -> dict:
    from .cht import frame_of
    c = Counter(frame_of(p).n for p in disk(radius) if p != (0, 0))
    return dict(sorted(c.items()))


def jsonl(records) -> str:
    return "".join(json.dumps(r, sort_keys=True, default=str) + "\n" for r in records)
