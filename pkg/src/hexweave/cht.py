"""Closed-form centered hexagonal tiling (CHT).

Every nonzero site p has a unique frame decomposition p = i*e_n + j*e_m with
Q(|i|) = Q(|j|).  Off the twelve spokes the black-stripe and red-blue
parities follow floor(i / Q(|i -+ j|)) mod 2, and the composition table of the
artifact turns (frame, pBS, pRB) into a tile state.

Spokes: the i = j rays carry the S vector, the i = -j rays carry s.  Ray
t (0..5) of either kind is the one leaving the centre at 60t degrees (stripe)
or 60t + 30 degrees (red-blue).  For ``parity_at`` the rays are re-parameterised
so that j = d >= 0 is the distance from the centre.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

from .artifact import resolve
from .lattice import (
    DIRS, HexCoord, Patch, TileState, corner_aliases, disk, edge_key, hex_distance,
    parity_of, vertex_key,
)

S_VECTOR = (0, 1, 1, 0, 1, 0)
S_CHOICES = {1: (0, 1, 0, 1, 1, 0), 2: (1, 1, 0, 0, 1, 0)}
CENTRAL = "central"

# frame n -> (e_n, e_m) as lattice vectors; e3 = -e1 - e2
_E = {1: (1, 0), 2: (0, 1), 3: (-1, -1)}
FRAME_AXES = {1: (_E[1], _E[3]), 2: (_E[2], _E[1]), 3: (_E[3], _E[2])}


class SpokeCase(ValueError):
    pass


def v2(n: int) -> float:
    n = abs(n)
    if n == 0:
        return math.inf
    return (n & -n).bit_length() - 1


def Q(n: int):
    """GCD(2^n, n), the 2-part of n; Q(0) is infinite."""
    if n < 0:
        raise ValueError("Q is defined for n >= 0")
    if n == 0:
        return math.inf
    return n & -n


def level_of(p):
    a, b = p
    if a == 0 and b == 0:
        return CENTRAL
    return int(v2(gcd(a, b))) + 1


class FrameDecomp(NamedTuple):
    n: int
    i: int
    j: int


def frame_of(p) -> FrameDecomp:
    a, b = p
    if a == 0 and b == 0:
        raise ValueError("the central site has no frame")
    va, vb, vd = v2(a), v2(b), v2(a - b)
    if vd == vb:
        return FrameDecomp(1, a - b, -b)
    if va == vb:
        return FrameDecomp(2, b, a)
    return FrameDecomp(3, -a, b - a)


def frame_point(f: FrameDecomp) -> HexCoord:
    (x1, y1), (x2, y2) = FRAME_AXES[f.n]
    return HexCoord(f.i * x1 + f.j * x2, f.i * y1 + f.j * y2)


def p_bs(i: int, j: int) -> int:
    if i == j:
        raise SpokeCase("black-stripe spoke")
    return (i // Q(abs(i - j))) % 2


def p_rb(i: int, j: int) -> int:
    if i == -j:
        raise SpokeCase("red-blue spoke")
    return (i // Q(abs(i + j))) % 2


class Spoke(NamedTuple):
    kind: str    # 'stripe' or 'rb'
    t: int       # index into the S or s vector
    ray: int     # 0..11, ray at 30*ray degrees
    d: int       # distance along the ray, >= 1


def _unit(vec, units):
    for t, u in enumerate(units):
        if vec == u:
            return t
    raise AssertionError(vec)


_SECOND = tuple((DIRS[t][0] + DIRS[(t + 1) % 6][0], DIRS[t][1] + DIRS[(t + 1) % 6][1])
                for t in range(6))


def spoke_of(p):
    f = frame_of(p)
    if f.i == f.j:
        d = abs(f.i)
        return Spoke("stripe", _unit((p[0] // d, p[1] // d), DIRS), 2 * _unit((p[0] // d, p[1] // d), DIRS), d)
    if f.i == -f.j:
        d = abs(f.i)
        t = _unit((p[0] // d, p[1] // d), _SECOND)
        return Spoke("rb", t, 2 * t + 1, d)
    return None


def ray_point(ray: int, d: int) -> HexCoord:
    t = ray // 2
    v = DIRS[t] if ray % 2 == 0 else _SECOND[t]
    return HexCoord(d * v[0], d * v[1])


@dataclass(frozen=True)
class ChtConfig:
    s_choice: int = 1
    central: TileState | None = None

    def __post_init__(self):
        if self.s_choice not in S_CHOICES:
            raise ValueError("s_choice must be 1 or 2")

    @property
    def s(self):
        return S_CHOICES[self.s_choice]

    def central_state(self, art=None) -> TileState:
        if self.central is not None:
            return self.central
        return resolve(art).centers[self.s_choice]

    def check(self, art=None):
        art = resolve(art)
        ref = art.centers.get(self.s_choice)
        if ref is not None and parity_of(self.central_state(art), art) != parity_of(ref, art):
            raise ValueError("central state parity does not agree with the s choice")
        return self


def classes_at(p, cfg: ChtConfig):
    """(frame, pBS, pRB) for a non-central site."""
    f = frame_of(p)
    sp = spoke_of(p)
    if sp is None:
        return f.n, p_bs(f.i, f.j), p_rb(f.i, f.j)
    if sp.kind == "stripe":
        return f.n, (S_VECTOR[sp.t] + (f.i < 0)) % 2, p_rb(f.i, f.j)
    return f.n, p_bs(f.i, f.j), (cfg.s[sp.t] + (f.i > 0)) % 2


def cht_state(p, cfg: ChtConfig = ChtConfig(), art=None) -> TileState:
    art = resolve(art)
    if p[0] == 0 and p[1] == 0:
        return cfg.central_state(art)
    return art.compose[classes_at(p, cfg)]


def parity_at(p, cfg: ChtConfig = ChtConfig(), art=None) -> int:
    """Closed-form parity: mod2(floor(i/Q(|i-j|)) + floor(i/Q(|i+j|)))."""
    if p[0] == 0 and p[1] == 0:
        return parity_of(cfg.central_state(art), resolve(art))
    f = frame_of(p)
    sp = spoke_of(p)
    if sp is None:
        return (f.i // Q(abs(f.i - f.j)) + f.i // Q(abs(f.i + f.j))) % 2
    d = sp.d
    if sp.kind == "stripe":
        # i = j = d: the i - j term is S_t
        return (S_VECTOR[sp.t] + d // Q(2 * d)) % 2
    # j = d, i = -d: the i + j term is s_t
    return (cfg.s[sp.t] + (-d) // Q(2 * d)) % 2


def build_patch(radius: int, cfg: ChtConfig = ChtConfig(), art=None) -> Patch:
    if radius < 0:
        raise ValueError("radius must be >= 0")
    art = resolve(art)
    return Patch({p: cht_state(p, cfg, art) for p in disk(radius)})


def build_rhombus(m: int, n: int, cfg: ChtConfig = ChtConfig(), art=None, origin=None) -> Patch:
    """m x n rhombus of sites a0 <= a < a0+m, b0 <= b < b0+n (centred by default)."""
    art = resolve(art)
    a0, b0 = origin if origin is not None else (-(m // 2), -(n // 2))
    return Patch({(a, b): cht_state((a, b), cfg, art)
                  for a in range(a0, a0 + m) for b in range(b0, b0 + n)})


def level_census(patch: Patch) -> Counter:
    return Counter(level_of(p) for p in patch.cells)


def level_fractions(patch: Patch) -> dict:
    c = level_census(patch)
    total = sum(v for k, v in c.items() if k != CENTRAL)
    return {k: v / total for k, v in sorted(c.items(), key=lambda kv: (kv[0] == CENTRAL, kv[0]))
            if k != CENTRAL}


def phi(n: int) -> float:
    return 3.0 * 4.0 ** (-n)


def eta(n: int) -> float:
    return 4.0 ** (-n)


def small_ring_vertices(patch: Patch, art=None) -> set:
    table = resolve(art).table
    out = set()
    for p, s in patch.cells.items():
        for c in range(6):
            if c not in table.arcs[s.index]:
                continue
            ok = True
            for q, cq in corner_aliases(p, c)[1:]:
                t = patch.at(q)
                if t is None or cq not in table.arcs[t.index]:
                    ok = False
                    break
            if ok:
                out.add(vertex_key(p, c))
    return out


def stripe_triangles(patch: Patch, art=None) -> dict:
    """Trace stripe chords through shared edges.

    Returns {'loops': Counter(scale -> count), 'open': number of open chains,
    'odd': loops whose chord count is not a multiple of 3}.  The scale of a
    closed loop is its chord count divided by three, i.e. its side length.
    """
    table = resolve(art).table
    inc = {}
    chords = []
    for p, s in patch.cells.items():
        for x, y in table.decs[s.index].chords:
            cid = len(chords)
            u, v = edge_key(p, x), edge_key(p, y)
            chords.append((u, v))
            inc.setdefault(u, []).append(cid)
            inc.setdefault(v, []).append(cid)
    seen = [False] * len(chords)
    loops, odd, opened = Counter(), 0, 0
    for start in range(len(chords)):
        if seen[start]:
            continue
        # flood the component
        comp, stack, closed = 0, [start], True
        seen[start] = True
        while stack:
            cid = stack.pop()
            comp += 1
            for node in chords[cid]:
                nbrs = inc[node]
                if len(nbrs) < 2:
                    closed = False
                for o in nbrs:
                    if not seen[o]:
                        seen[o] = True
                        stack.append(o)
        if not closed:
            opened += 1
        elif comp % 3:
            odd += 1
        else:
            loops[comp // 3] += 1
    return {"loops": loops, "open": opened, "odd": odd}


def ring_vertex_oracle(patch: Patch) -> set:
    """Vertices none of whose three tiles sits on the even sublattice.

    Independent description of the level-1 honeycomb of small rings: the
    level >= 2 sites and the centre are exactly the sites with both
    coordinates even.
    """
    out = set()
    for p in patch.cells:
        for c in range(6):
            names = corner_aliases(p, c)
            if all(patch.at(q) is not None for q, _ in names) and \
                    all(q[0] % 2 or q[1] % 2 for q, _ in names):
                out.add(vertex_key(p, c))
    return out


def is_interior(patch: Patch, p, margin: int = 1) -> bool:
    return all(patch.at(q) is not None for q in disk(margin, p))


def radius_of(patch: Patch) -> int:
    return max((hex_distance(p) for p in patch.cells), default=0)
