"""Half-hexagon substitution: the 28-symbol alphabet, decomposition tables,
inflation, unique composition, hexagon pairing and the polyhex partition.

Placement of a half-hexagon: ``Slot(a, b, u)`` is the half of hexagon (a, b)
whose short sides are edges u-1, u, u+1 (its body points toward direction u).
The long side is the diagonal shared with the partner slot (a, b, u+3).
Short sides of an L tile are numbered 4, 5, 6 and of an R tile 1, 2, 3; the
artifact gives the edge of each side relative to u.  The canonical hexagon
(orientation 0) has its L half at u = 3 and its R half at u = 0.

A parent at slot (P, U) is replaced by its central C child at (2P, U) and, for
each short side on edge e, the listed child at (2P + dir(e), e + 3).
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import NamedTuple

from .artifact import LETTERS, resolve
from .lattice import HexCoord, Patch, TileState, neighbor, rotate


class SubstitutionError(ValueError):
    pass


class UnknownArrangement(SubstitutionError):
    pass


class AmbiguousComposition(SubstitutionError):
    pass


class IllegalPair(SubstitutionError):
    pass


class PartitionViolation(SubstitutionError):
    def __init__(self, cell, msg):
        super().__init__(f"{tuple(cell)}: {msg}")
        self.cell = cell


class Symbol(NamedTuple):
    letter: str
    half: str      # 'L' or 'R'
    barred: bool = False

    def mirror(self) -> "Symbol":
        return Symbol(self.letter, "R" if self.half == "L" else "L", not self.barred)

    def partner(self) -> "Symbol":
        return Symbol(self.letter, "R" if self.half == "L" else "L", self.barred)

    def __str__(self):
        return f"{self.letter}{'~' if self.barred else ''}_{self.half}"

    @classmethod
    def parse(cls, text: str) -> "Symbol":
        t = unicodedata.normalize("NFD", text.strip()).replace("\u0304", "~")
        try:
            name, half = t.split("_")
        except ValueError:
            raise ValueError(f"bad half-hex symbol {text!r}") from None
        barred = name.endswith(("~", "b")) and len(name) == 2
        letter = name[0].upper()
        if letter not in LETTERS or half not in ("L", "R") or len(name) > 2 or \
                (len(name) == 2 and not barred):
            raise ValueError(f"bad half-hex symbol {text!r}")
        return cls(letter, half, barred)


ALL_SYMBOLS = tuple(Symbol(x, h, bar) for bar in (False, True) for h in "LR" for x in LETTERS)

SIDES = {"L": (6, 5, 4), "R": (1, 2, 3)}
MIRROR_SIDE = {6: 1, 5: 2, 4: 3, 1: 6, 2: 5, 3: 4}


def _row(text):
    return tuple(Symbol.parse(t) for t in text.split())


# children on sides 6, 5, 4 (left tiles) or 1, 2, 3 (right tiles)
LEFT_TABLE = {
    "A": _row("G_R D_R G~_L"), "B": _row("B~_R F_R G~_L"), "F": _row("B~_R F_R B~_L"),
    "E": _row("B~_R E_R B_L"), "C": _row("F~_R E~_R F_L"), "G": _row("B_R D_R G~_L"),
    "D": _row("B_R D_R B~_L"),
}
RIGHT_TABLE = {
    "A": _row("A~_L D~_L A_R"), "B": _row("G_L F~_L A_R"), "F": _row("G_L E~_L A~_R"),
    "E": _row("G_L E~_L G~_R"), "C": _row("D_L E_L D~_R"), "G": _row("A_L F~_L A_R"),
    "D": _row("A_L E~_L A~_R"),
}
FORBIDDEN = (
    (Symbol("C", "L"), _row("G_R D_R B~_L")),
    (Symbol("C", "R"), _row("A_L E~_L G~_R")),
)


def decompose(x: Symbol) -> tuple[Symbol, dict]:
    """Central child and {side: child} for one symbol."""
    if x.barred:
        c, kids = decompose(x.mirror())
        return c.mirror(), {MIRROR_SIDE[s]: k.mirror() for s, k in kids.items()}
    row = (LEFT_TABLE if x.half == "L" else RIGHT_TABLE)[x.letter]
    return Symbol("C", x.half), dict(zip(SIDES[x.half], row))


def forbidden_arrangements() -> list:
    out = []
    for c, row in FORBIDDEN:
        sides = SIDES[c.half]
        out.append((c, dict(zip(sides, row))))
        out.append((c.mirror(), {MIRROR_SIDE[s]: k.mirror() for s, k in zip(sides, row)}))
    return out


def _key(center: Symbol, kids: dict):
    return (center, tuple(kids[s] for s in sorted(kids)))


_FORBIDDEN_KEYS = {_key(c, k) for c, k in forbidden_arrangements()}


def is_forbidden(center: Symbol, kids: dict) -> bool:
    return _key(center, kids) in _FORBIDDEN_KEYS


def _compose_index():
    idx = {}
    for x in ALL_SYMBOLS:
        c, kids = decompose(x)
        idx.setdefault(_key(c, kids), []).append(x)
    return idx


COMPOSE_INDEX = _compose_index()


# -- placements -------------------------------------------------------------

class Slot(NamedTuple):
    a: int
    b: int
    u: int

    @property
    def hex(self) -> HexCoord:
        return HexCoord(self.a, self.b)

    def partner(self) -> "Slot":
        return Slot(self.a, self.b, (self.u + 3) % 6)


def side_edge(half: str, u: int, side: int, art=None) -> int:
    return (u + resolve(art).placements[(half, side)]) % 6


def edge_side(half: str, u: int, e: int, art=None) -> int | None:
    for side in SIDES[half]:
        if side_edge(half, u, side, art) == e % 6:
            return side
    return None


def children(slot: Slot, x: Symbol, art=None) -> list[tuple[Slot, Symbol]]:
    c, kids = decompose(x)
    P2 = (2 * slot.a, 2 * slot.b)
    out = [(Slot(P2[0], P2[1], slot.u), c)]
    for side in SIDES[x.half]:
        e = side_edge(x.half, slot.u, side, art)
        q = neighbor(P2, e)
        out.append((Slot(q[0], q[1], (e + 3) % 6), kids[side]))
    return out


@dataclass
class HalfHexPatch:
    cells: dict                          # Slot -> Symbol
    core: set = field(default_factory=set)

    def __post_init__(self):
        self.cells = {Slot(*k): v for k, v in self.cells.items()}
        if not self.core:
            self.core = set(self.cells)
        else:
            self.core = {Slot(*k) for k in self.core}

    def core_cells(self) -> dict:
        return {k: v for k, v in self.cells.items() if k in self.core}

    def __len__(self):
        return len(self.cells)


def seed(x: Symbol, at=(0, 0)) -> HalfHexPatch:
    u = 3 if x.half == "L" else 0
    return HalfHexPatch({Slot(at[0], at[1], u): x})


def complete(cells: dict) -> dict:
    """Partners for halves whose hexagon is incomplete."""
    extra = {}
    for slot, x in cells.items():
        p = slot.partner()
        if p not in cells:
            extra[p] = x.partner()
    return extra


def inflate(patch: HalfHexPatch, steps: int = 1, art=None) -> HalfHexPatch:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    core = patch.core_cells()
    for _ in range(steps):
        new = {}
        for slot, x in sorted(core.items()):
            for cs, cx in children(slot, x, art):
                if cs in new:
                    raise SubstitutionError(f"overlapping children at {tuple(cs)}")
                new[cs] = cx
        core = new
    cells = dict(core)
    cells.update(complete(core))
    return HalfHexPatch(cells, set(core))


# -- composition ------------------------------------------------------------

@dataclass
class Composition:
    patch: HalfHexPatch
    offset: tuple          # fine = 2 * coarse + offset
    partial: int = 0       # C cells with an incomplete flanking triple
    orphans: int = 0       # cells not claimed by any interior C


def compose_unique(patch: HalfHexPatch, art=None) -> Composition:
    cells = patch.cells
    centers = [s for s, x in cells.items() if x.letter == "C"]
    if not centers:
        return Composition(HalfHexPatch({}), (0, 0), 0, len(cells))
    cosets = {(s.a % 2, s.b % 2) for s in centers}
    if len(cosets) != 1:
        raise UnknownArrangement(f"C cells occupy {len(cosets)} cosets of the doubled lattice")
    off = cosets.pop()
    coarse, claimed, partial = {}, {}, 0
    for s in sorted(centers):
        c = cells[s]
        kids = {}
        for side in SIDES[c.half]:
            e = side_edge(c.half, s.u, side, art)
            q = neighbor((s.a, s.b), e)
            ks = Slot(q[0], q[1], (e + 3) % 6)
            if ks in cells:
                kids[side] = (ks, cells[ks])
        if len(kids) < 3:
            partial += 1
            continue
        row = {side: x for side, (_, x) in kids.items()}
        if is_forbidden(c, row):
            raise UnknownArrangement(f"forbidden arrangement around {tuple(s)}")
        parents = COMPOSE_INDEX.get(_key(c, row), [])
        if not parents:
            raise UnknownArrangement(f"arrangement around {tuple(s)} matches no table row")
        if len(parents) > 1:
            raise AmbiguousComposition(f"arrangement around {tuple(s)} matches {len(parents)} rows")
        for ks, _ in kids.values():
            if ks in claimed:
                raise AmbiguousComposition(f"cell {tuple(ks)} claimed by two C cells")
            claimed[ks] = s
        claimed[s] = s
        coarse[Slot((s.a - off[0]) // 2, (s.b - off[1]) // 2, s.u)] = parents[0]
    orphans = sum(1 for s in cells if s not in claimed)
    return Composition(HalfHexPatch(coarse), off, partial, orphans)


# -- hexagons ---------------------------------------------------------------

class HexCell(NamedTuple):
    letter: str
    barred: bool
    orientation: int    # rotation of the canonical hexagon (L half at u = 3)


def _illegal(l: Symbol, r: Symbol):
    bad = {("C", "E"), ("E", "C")}
    if l.barred == r.barred:
        ll, rr = (l.letter, r.letter) if not l.barred else (r.letter, l.letter)
        if (ll, rr) in bad:
            return "excluded pair (does not tile)"
    return "halves do not match"


def to_hexagons(patch: HalfHexPatch, strict_complete: bool = False) -> dict:
    out = {}
    for slot, x in sorted(patch.cells.items()):
        p = slot.partner()
        y = patch.cells.get(p)
        if y is None:
            if strict_complete:
                raise IllegalPair(f"half {x} at {tuple(slot)} has no partner")
            continue
        if x.half == y.half:
            raise IllegalPair(f"two {x.half} halves in hexagon {tuple(slot.hex)}")
        if x.half != "L":
            continue
        if y.letter != x.letter or y.barred != x.barred:
            raise IllegalPair(f"{x}+{y} at {tuple(slot.hex)}: {_illegal(x, y)}")
        out[slot.hex] = HexCell(x.letter, x.barred, (slot.u - 3) % 6)
    return out


def hex_to_tile_state(cell: HexCell, art=None) -> TileState:
    art = resolve(art)
    return rotate(art.hex_state(cell.letter, cell.barred), cell.orientation)


def hexagons_to_patch(hexes: dict, art=None) -> Patch:
    art = resolve(art)
    return Patch({h: hex_to_tile_state(c, art) for h, c in hexes.items()})


# side number of an edge of a hexagon, relative to its orientation
_REL_SIDE = {1: 1, 0: 2, 5: 3, 4: 4, 3: 5, 2: 6}


def hex_side_edge(cell: HexCell, side: int) -> int:
    for rel, s in _REL_SIDE.items():
        if s == side:
            return (cell.orientation + rel) % 6
    raise ValueError(side)


def hex_edge_side(cell: HexCell, e: int) -> int:
    return _REL_SIDE[(e - cell.orientation) % 6]


# -- polyhexes --------------------------------------------------------------

class Polyhex(NamedTuple):
    kind: str           # 'glugon', 'ctile', 'cluster'
    cells: tuple


def _glugon_roles(barred: bool):
    # role -> (side toward the other two members)
    if not barred:
        return {"A": {1: ("G", True), 6: ("B", False)},
                "B": {1: ("A", False), 6: ("G", True)},
                "G": {6: ("A", False), 1: ("B", False)}}
    return {"A": {6: ("G", False), 1: ("B", True)},
            "B": {6: ("A", True), 1: ("G", False)},
            "G": {1: ("A", True), 6: ("B", True)}}


def _glugon_member(cell: HexCell):
    """(role table, is member) for a hexagon type."""
    if cell.letter in "AB":
        return _glugon_roles(cell.barred), cell.letter
    if cell.letter == "G":
        return _glugon_roles(not cell.barred), "G"
    return None, None


def glugon_partition(hexes: dict, strict: bool = True) -> dict:
    """Group hexagons into glugons, C tiles and C clusters.

    Returns {'polyhexes': [...], 'unassigned': [...]}.  With ``strict`` a
    hexagon whose neighbourhood is present but contradicts the grouping raises
    PartitionViolation; cells on the boundary may stay unassigned.
    """
    hexes = {HexCoord(*h): c for h, c in hexes.items()}
    owner = {}
    polys = []

    def full(h):
        return all(neighbor(h, k) in hexes for k in range(6))

    for h in sorted(hexes):
        cell = hexes[h]
        roles, role = _glugon_member(cell)
        if roles is None or h in owner:
            continue
        members = {role: h}
        ok = True
        for side, (want, wbar) in roles[role].items():
            q = neighbor(h, hex_side_edge(cell, side))
            other = hexes.get(q)
            if other is None:
                ok = False
                continue
            back = hex_edge_side(other, hex_side_edge(cell, side) + 3)
            if (other.letter, other.barred) != (want, wbar) or \
                    roles[want].get(back) != (cell.letter, cell.barred):
                if strict and full(h):
                    raise PartitionViolation(h, f"{cell.letter}{'~' if cell.barred else ''} side {side} "
                                                f"abuts {other.letter}{'~' if other.barred else ''}")
                ok = False
                continue
            members[want] = q
        if ok and len(members) == 3:
            cells = tuple(sorted(members.values()))
            if any(c in owner for c in cells):
                raise PartitionViolation(h, "hexagon in two glugons")
            for c in cells:
                owner[c] = len(polys)
            polys.append(Polyhex("glugon", cells))
    # C hexagons: cluster centre if no glugon touches it
    for h in sorted(hexes):
        if hexes[h].letter != "C":
            continue
        nbrs = [neighbor(h, k) for k in range(6)]
        touches = any(_glugon_member(hexes[q])[0] is not None for q in nbrs if q in hexes)
        if touches:
            owner[h] = len(polys)
            polys.append(Polyhex("ctile", (h,)))
        elif full(h):
            cells = (h,) + tuple(sorted(nbrs))
            for c in cells:
                if c in owner:
                    raise PartitionViolation(c, "hexagon in two polyhexes")
                if c != h and hexes[c].letter not in "DEF":
                    raise PartitionViolation(c, "cluster ring holds a non D/E/F hexagon")
            for c in cells:
                owner[c] = len(polys)
            polys.append(Polyhex("cluster", cells))
    unassigned = [h for h in sorted(hexes) if h not in owner]
    if strict:
        for h in unassigned:
            if all(q in hexes for q in [neighbor(h, k) for k in range(6)]) and \
                    all(all(neighbor(q, k) in hexes for k in range(6)) for q in [neighbor(h, k) for k in range(6)]):
                raise PartitionViolation(h, "interior hexagon belongs to no polyhex")
    return {"polyhexes": polys, "unassigned": unassigned}


def c_lattice_ok(hexes: dict) -> bool:
    """All C hexagons share one coset of the doubled lattice."""
    cos = {(h[0] % 2, h[1] % 2) for h, c in hexes.items() if c.letter == "C"}
    return len(cos) <= 1


# -- text format ------------------------------------------------------------

HH_HEADER = "hexweave-hh/1"


def dumps_hh(patch: HalfHexPatch) -> str:
    out = [HH_HEADER]
    for s in sorted(patch.cells):
        out.append(f"{s.a} {s.b} {s.u} {patch.cells[s]} {1 if s in patch.core else 0}")
    return "\n".join(out) + "\n"


def loads_hh(text: str) -> HalfHexPatch:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HH_HEADER:
        raise ValueError(f"expected header {HH_HEADER!r}")
    cells, core = {}, set()
    for no, ln in enumerate(lines[1:], start=2):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        t = ln.split()
        try:
            s = Slot(int(t[0]), int(t[1]), int(t[2]) % 6)
            cells[s] = Symbol.parse(t[3])
            if len(t) < 5 or t[4] == "1":
                core.add(s)
        except (ValueError, IndexError) as e:
            raise ValueError(f"line {no}: {e}") from None
    p = HalfHexPatch(cells)
    p.core = core
    return p
