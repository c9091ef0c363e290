"""Triangular-lattice coordinates, tile-state algebra, decorations and the
three matching rules.

Conventions (fixed once, property-tested in tests/test_lattice.py):

* A hexagon centre is p = a*e1 + b*e2 with e1 = (1, 0) and e2 at 120 degrees.
  Neighbour direction k points at angle 60k degrees, counterclockwise.
* Hexagons are pointy-top.  Corner k sits at angle 60k - 30, edge k joins
  corners k and k+1 and faces neighbour k.
* Corner k of p is also corner k+4 of p+dir(k) and corner k+2 of p+dir(k-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

DIRS = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))

RED, BLUE = 0, 1
COLOR_NAMES = "RB"

SQRT3 = math.sqrt(3.0)


class HexCoord(NamedTuple):
    a: int
    b: int


def neighbor(p, k: int) -> HexCoord:
    d = DIRS[k % 6]
    return HexCoord(p[0] + d[0], p[1] + d[1])


def second_neighbor(p, c: int) -> HexCoord:
    """Next-nearest neighbour in the direction of corner ``c``."""
    d1, d2 = DIRS[(c - 1) % 6], DIRS[c % 6]
    return HexCoord(p[0] + d1[0] + d2[0], p[1] + d1[1] + d2[1])


def hex_distance(p, q=(0, 0)) -> int:
    da, db = p[0] - q[0], p[1] - q[1]
    return max(abs(da), abs(db), abs(da - db))


def disk(radius: int, center=(0, 0)) -> list[HexCoord]:
    out = []
    for a in range(-radius, radius + 1):
        for b in range(-radius, radius + 1):
            if abs(a - b) <= radius:
                out.append(HexCoord(center[0] + a, center[1] + b))
    return out


def spiral(cells: Iterable, center=(0, 0)) -> list[HexCoord]:
    """Cells sorted by distance from ``center``, then by angle, then by coords."""

    def key(p):
        x, y = position((p[0] - center[0], p[1] - center[1]))
        ang = math.atan2(y, x) % (2 * math.pi)
        return (hex_distance(p, center), round(ang, 9), p[0], p[1])

    return sorted((HexCoord(*p) for p in cells), key=key)


def position(p) -> tuple[float, float]:
    """Cartesian centre, lattice constant 1, y up."""
    return (p[0] - 0.5 * p[1], 0.5 * SQRT3 * p[1])


def corner_position(p, k: int) -> tuple[float, float]:
    x, y = position(p)
    t = math.radians(60 * k - 30)
    r = 1.0 / SQRT3
    return (x + r * math.cos(t), y + r * math.sin(t))


def corner_aliases(p, k: int) -> tuple:
    """The three (tile, corner) names of one lattice vertex."""
    k %= 6
    p = HexCoord(*p)
    return ((p, k), (neighbor(p, k), (k + 4) % 6), (neighbor(p, k - 1), (k + 2) % 6))


def vertex_key(p, k: int) -> tuple[int, int, int]:
    """Canonical vertex name (a, b, c) with c in {0, 1}."""
    for q, c in corner_aliases(p, k):
        if c < 2:
            return (q[0], q[1], c)
    raise AssertionError("unreachable")


def edge_key(p, k: int) -> tuple[int, int, int]:
    k %= 6
    if k < 3:
        return (p[0], p[1], k)
    q = neighbor(p, k)
    return (q[0], q[1], k - 3)


# -- symmetry ---------------------------------------------------------------

class Sym(NamedTuple):
    """Mirror (if ``flip``) across the corner-0/corner-3 line, then rotate by ``k``."""
    k: int
    flip: bool

    def compose(self, other: "Sym") -> "Sym":
        # (self after other)
        if self.flip:
            return Sym((self.k - other.k) % 6, not other.flip)
        return Sym((self.k + other.k) % 6, other.flip)

    def inverse(self) -> "Sym":
        if self.flip:
            return self
        return Sym((-self.k) % 6, False)

    def corner(self, c: int) -> int:
        return ((-c if self.flip else c) + self.k) % 6

    def edge(self, e: int) -> int:
        return ((-e - 1 if self.flip else e) + self.k) % 6

    def direction(self, d: int) -> int:
        return self.edge(d)

    def point(self, p) -> HexCoord:
        a, b = p[0], p[1]
        if self.flip:
            a, b = -b, -a
        for _ in range(self.k % 6):
            a, b = a - b, a
        return HexCoord(a, b)


SYMMETRIES = tuple(Sym(k, f) for f in (False, True) for k in range(6))
VMIRROR = Sym(4, True)  # mirror across the vertical axis through corners 2 and 5


class TileState(NamedTuple):
    rot: int
    chi: str  # 'R' or 'L'

    @property
    def index(self) -> int:
        return self.rot + (6 if self.chi == "L" else 0)

    @classmethod
    def from_index(cls, i: int) -> "TileState":
        return cls(i % 6, "L" if i >= 6 else "R")

    @classmethod
    def parse(cls, text: str) -> "TileState":
        t = text.strip().replace(",", " ").replace("/", " ").split()
        if len(t) == 1 and len(t[0]) >= 2:
            t = [t[0][:-1], t[0][-1]]
        rot, chi = int(t[0]) % 6, t[1].upper()
        if chi not in ("L", "R"):
            raise ValueError(f"bad chirality in {text!r}")
        return cls(rot, chi)

    def __str__(self):
        return f"{self.rot}{self.chi}"


ALL_STATES = tuple(TileState.from_index(i) for i in range(12))


def transform(s: TileState, g: Sym) -> TileState:
    r, c = s.rot, s.chi
    if g.flip:
        r, c = -r, ("L" if c == "R" else "R")
    return TileState((r + g.k) % 6, c)


def reflect(s: TileState) -> TileState:
    return transform(s, Sym(0, True))


def rotate(s: TileState, k: int = 1) -> TileState:
    return transform(s, Sym(k, False))


# -- decoration -------------------------------------------------------------

class DecorationError(ValueError):
    pass


def _chord_kind(x: int, y: int) -> str:
    d = (y - x) % 6
    if d == 3:
        return "long"
    if d in (1, 5):
        return "arc"
    return "bent"


@dataclass(frozen=True)
class Decoration:
    """Markings of one tile.

    edge_bits[k]: 0 if the black stripe crosses edge k near corner k, 1 if
    near corner k+1.  chords: three edge pairs.  colors[v]: colour of the
    half-diameter ending at corner v.
    """
    edge_bits: tuple
    chords: tuple
    colors: tuple

    def __post_init__(self):
        object.__setattr__(self, "edge_bits", tuple(int(x) for x in self.edge_bits))
        object.__setattr__(self, "colors", tuple(int(x) for x in self.colors))
        ch = tuple(sorted(tuple(sorted((x % 6, y % 6))) for x, y in self.chords))
        object.__setattr__(self, "chords", ch)

    # derived views
    def chord_kinds(self) -> list[tuple[tuple[int, int], str]]:
        return [(c, _chord_kind(*c)) for c in self.chords]

    def long_chord(self):
        longs = [c for c, kd in self.chord_kinds() if kd == "long"]
        return longs[0] if len(longs) == 1 else None

    def arc_corners(self) -> frozenset:
        """Corners hugged by a corner arc."""
        out = set()
        for (x, y), kd in self.chord_kinds():
            if kd == "arc":
                out.add(y if (y - x) % 6 == 1 else x)
        return frozenset(out)

    def stripe_class(self):
        """Edge at which the long stripe crosses near its lower corner."""
        lc = self.long_chord()
        if lc is None:
            return None
        x, y = lc
        return x if self.edge_bits[x] == 0 else y

    def diameter_class(self):
        """Corner holding the red end of the red-blue diameter."""
        for v in range(6):
            if self.colors[v] == RED and self.colors[(v + 3) % 6] == BLUE:
                return v
        return None

    def check(self):
        bits, cols = self.edge_bits, self.colors
        if len(bits) != 6 or any(b not in (0, 1) for b in bits):
            raise DecorationError("edge bits must be six 0/1 values")
        if len(cols) != 6 or any(c not in (RED, BLUE) for c in cols):
            raise DecorationError("vertex colors must be six R/B values")
        used = sorted(x for c in self.chords for x in c)
        if used != list(range(6)):
            raise DecorationError("stripe chords must match all six edges")
        kinds = [kd for _, kd in self.chord_kinds()]
        if kinds.count("long") != 1 or kinds.count("arc") != 2:
            raise DecorationError("need one long stripe and two corner arcs")
        for (x, y), kd in self.chord_kinds():
            if kd == "arc":
                lo, hi = (x, y) if (y - x) % 6 == 1 else (y, x)
                # both crossings must sit next to the shared corner hi
                if not (bits[lo] == 1 and bits[hi] == 0):
                    raise DecorationError(f"arc {x}-{y} does not hug its corner")
            else:
                if bits[x] == bits[y]:
                    raise DecorationError(f"long stripe {x}-{y} is not straight")
        pairs = sorted((cols[v] + cols[v + 3]) for v in range(3))
        if pairs != [0, 1, 2]:
            raise DecorationError("diameters must be one red, one blue, one mixed")
        return self

    # group action
    def rotated(self, r: int) -> "Decoration":
        r %= 6
        return Decoration(
            tuple(self.edge_bits[(k - r) % 6] for k in range(6)),
            tuple(((x + r) % 6, (y + r) % 6) for x, y in self.chords),
            tuple(self.colors[(k - r) % 6] for k in range(6)),
        )

    def mirrored(self) -> "Decoration":
        bits = [0] * 6
        cols = [0] * 6
        for k in range(6):
            bits[(-k - 1) % 6] = 1 - self.edge_bits[k]
            cols[(-k) % 6] = 1 - self.colors[k]
        chords = tuple(((-x - 1) % 6, (-y - 1) % 6) for x, y in self.chords)
        return Decoration(tuple(bits), chords, tuple(cols))

    def colour_swapped(self) -> "Decoration":
        return Decoration(self.edge_bits, self.chords, tuple(1 - c for c in self.colors))

    def transformed(self, g: Sym) -> "Decoration":
        d = self.mirrored() if g.flip else self
        return d.rotated(g.k)

    def text_fields(self) -> dict:
        return {
            "edge-bits": " ".join(map(str, self.edge_bits)),
            "chords": " ".join(f"{x}-{y}:{kd}" for (x, y), kd in self.chord_kinds()),
            "colors": " ".join(COLOR_NAMES[c] for c in self.colors),
        }

    def sort_key(self):
        return (self.edge_bits, self.chords, self.colors)


class DecorationTable:
    """Decorations of all twelve states, built from the base state (0, R)."""

    def __init__(self, base: Decoration):
        base.check()
        self.base = base
        self.decs = tuple(base.transformed(Sym(s.rot, s.chi == "L")) for s in ALL_STATES)
        for d in self.decs:
            d.check()
        if len(set(self.decs)) != 12:
            raise DecorationError("base decoration has a nontrivial stabiliser")
        self.bits = tuple(d.edge_bits for d in self.decs)
        self.cols = tuple(d.colors for d in self.decs)
        self.arcs = tuple(d.arc_corners() for d in self.decs)

    def __getitem__(self, s: TileState) -> Decoration:
        return self.decs[s.index]

    def r1_ok(self, s: int, t: int, k: int) -> bool:
        """state index s at p, t at p+dir(k)."""
        return self.bits[s][k % 6] == 1 - self.bits[t][(k + 3) % 6]

    def r2_ok(self, s: int, t: int, c: int) -> bool:
        """state index s at r, t at the second neighbour of r toward corner c."""
        return self.cols[s][c % 6] != self.cols[t][(c + 3) % 6]


def decoration_of(s: TileState, table: DecorationTable | None = None) -> Decoration:
    if table is None:
        from .artifact import default_artifact
        table = default_artifact().table
    return table[s]


def parity_of(s: TileState, art=None) -> int:
    """mod2(pBS + pRB) of the stripe and diameter classes the composition
    table assigns to ``s``."""
    if art is None:
        from .artifact import default_artifact
        art = default_artifact()
    return art.parity[s.index]


# -- patches ----------------------------------------------------------------

class Torus(NamedTuple):
    """Quotient of the lattice by the columns of [[a, b], [0, d]] (Hermite form)."""
    a: int
    b: int
    d: int

    @property
    def index(self) -> int:
        return self.a * self.d

    def reduce(self, p) -> HexCoord:
        x, y = p[0], p[1]
        q = y // self.d
        x, y = x - q * self.b, y - q * self.d
        return HexCoord(x % self.a, y)

    def cells(self) -> list[HexCoord]:
        return [HexCoord(x, y) for y in range(self.d) for x in range(self.a)]

    def basis(self):
        return ((self.a, 0), (self.b, self.d))


@dataclass(frozen=True)
class Patch:
    cells: Mapping
    torus: Torus | None = None

    def __post_init__(self):
        cells = {}
        for p, s in dict(self.cells).items():
            key = self.torus.reduce(p) if self.torus else HexCoord(*p)
            cells[key] = s if isinstance(s, TileState) else TileState(*s)
        object.__setattr__(self, "cells", MappingProxyType(cells))

    def at(self, p):
        if self.torus is not None:
            p = self.torus.reduce(p)
        return self.cells.get(p)

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(sorted(self.cells))

    def replace(self, updates: Mapping) -> "Patch":
        c = dict(self.cells)
        c.update(updates)
        return Patch(c, self.torus)

    def transformed(self, g: Sym) -> "Patch":
        if self.torus is not None:
            raise ValueError("transform of torus patches is not supported")
        return Patch({g.point(p): transform(s, g) for p, s in self.cells.items()})

    @property
    def topology(self) -> str:
        return "planar" if self.torus is None else "torus %d %d %d" % tuple(self.torus)


# -- rules ------------------------------------------------------------------

PASS, FAIL, UNCHECKED = "pass", "fail", "unchecked"
RULES = ("R1", "R2", "R3")


def _table(table):
    if table is None:
        from .artifact import default_artifact
        return default_artifact().table
    return table


def check_r1(patch: Patch, p, k: int, table=None) -> str:
    t = _table(table)
    s, q = patch.at(p), patch.at(neighbor(p, k))
    if s is None or q is None:
        return UNCHECKED
    return PASS if t.r1_ok(s.index, q.index, k) else FAIL


def r2_witnesses(p, k: int):
    """The two tiles beyond the endpoints of edge k of p, and their corners
    that touch those endpoints."""
    return (neighbor(p, k - 1), (k + 2) % 6), (neighbor(p, k + 1), (k - 1) % 6)


def check_r2(patch: Patch, p, k: int, table=None) -> str:
    t = _table(table)
    (r, cr), (w, cw) = r2_witnesses(p, k)
    sr, sw = patch.at(r), patch.at(w)
    if sr is None or sw is None:
        return UNCHECKED
    return PASS if t.cols[sr.index][cr] != t.cols[sw.index][cw] else FAIL


def vertex_colors(patch: Patch, p, c: int, table=None):
    t = _table(table)
    out = []
    for q, cq in corner_aliases(p, c):
        s = patch.at(q)
        if s is None:
            return None
        out.append(t.cols[s.index][cq])
    return out


def check_r3(patch: Patch, p, c: int, table=None) -> str:
    cols = vertex_colors(patch, p, c, table)
    if cols is None:
        return UNCHECKED
    return FAIL if cols[0] == cols[1] == cols[2] else PASS


@dataclass
class RuleReport:
    counts: dict = field(default_factory=lambda: {r: {PASS: 0, FAIL: 0, UNCHECKED: 0} for r in RULES})
    violations: list = field(default_factory=list)
    sites: dict = field(default_factory=lambda: {r: 0 for r in RULES})

    @property
    def failures(self) -> int:
        return sum(c[FAIL] for c in self.counts.values())

    @property
    def clean(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {
            "counts": self.counts,
            "sites": self.sites,
            "failures": self.failures,
            "violations": [list(v) for v in self.violations],
        }

    def summary(self) -> str:
        parts = []
        for r in RULES:
            c = self.counts[r]
            if self.sites[r]:
                parts.append(f"{r}: {c[PASS]} pass, {c[FAIL]} fail, {c[UNCHECKED]} unchecked")
        return "; ".join(parts) if parts else "empty patch"


def patch_edges(patch: Patch) -> list:
    if patch.torus is not None:
        return [(p[0], p[1], k) for p in sorted(patch.cells) for k in range(3)]
    keys = set()
    for p in patch.cells:
        for k in range(6):
            keys.add(edge_key(p, k))
    return sorted(keys)


def patch_vertices(patch: Patch) -> list:
    if patch.torus is not None:
        return [(p[0], p[1], c) for p in sorted(patch.cells) for c in range(2)]
    keys = set()
    for p in patch.cells:
        for c in range(6):
            keys.add(vertex_key(p, c))
    return sorted(keys)


def r2_edges(patch: Patch) -> list:
    """Edges of the patch plus edges whose two R2 witnesses are both present."""
    if patch.torus is not None:
        return patch_edges(patch)
    keys = set(patch_edges(patch))
    for r in patch.cells:
        for c in range(6):
            if patch.at(second_neighbor(r, c)) is not None:
                keys.add(edge_key(neighbor(r, c), c - 2))
    return sorted(keys)


def validate(patch: Patch, rules: Iterable[str] = RULES, table=None) -> RuleReport:
    t = _table(table)
    rules = {r.upper() for r in rules}
    rep = RuleReport()
    r1_sites = set(patch_edges(patch)) if "R1" in rules else set()
    r2_sites = set(r2_edges(patch)) if "R2" in rules else set()
    for a, b, k in sorted(r1_sites | r2_sites):
        p = (a, b)
        if (a, b, k) in r1_sites:
            v = check_r1(patch, p, k, t)
            rep.counts["R1"][v] += 1
            rep.sites["R1"] += 1
            if v == FAIL:
                rep.violations.append(("R1", "edge", a, b, k))
        if (a, b, k) in r2_sites:
            v = check_r2(patch, p, k, t)
            rep.counts["R2"][v] += 1
            rep.sites["R2"] += 1
            if v == FAIL:
                rep.violations.append(("R2", "edge", a, b, k))
    if "R3" in rules:
        for a, b, c in patch_vertices(patch):
            v = check_r3(patch, (a, b), c, t)
            rep.counts["R3"][v] += 1
            rep.sites["R3"] += 1
            if v == FAIL:
                rep.violations.append(("R3", "vertex", a, b, c))
    return rep
