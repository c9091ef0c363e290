"""The decoration artifact: base decoration, composition table, spoke
centres, hexagon mapping and child placements, in a versioned text file.

The shipped default lives in ``data/default.dec`` and was written by
``hexweave self-derive``.  ``HEXWEAVE_DEC`` overrides the path.
"""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .lattice import (
    ALL_STATES, COLOR_NAMES, Decoration, DecorationError, DecorationTable, TileState,
    reflect, rotate,
)

HEADER = "hexweave-dec/1"
LETTERS = "ABCDEFG"

# side number -> offset of the edge it lies on, relative to the body direction
DEFAULT_PLACEMENTS = {("L", 4): 1, ("L", 5): 0, ("L", 6): -1,
                      ("R", 1): 1, ("R", 2): 0, ("R", 3): -1}


class ArtifactError(ValueError):
    pass


@dataclass
class Artifact:
    base: Decoration
    compose: dict                     # (frame, pbs, prb) -> TileState
    centers: dict = field(default_factory=dict)    # s-choice (1|2) -> TileState
    hexmap: dict = field(default_factory=dict)     # (letter, barred) -> TileState
    placements: dict = field(default_factory=lambda: dict(DEFAULT_PLACEMENTS))
    digest: str = ""

    def __post_init__(self):
        try:
            self.table = DecorationTable(self.base)
        except DecorationError as e:
            raise ArtifactError(f"invalid base decoration: {e}") from e
        keys = {(n, x, y) for n in (1, 2, 3) for x in (0, 1) for y in (0, 1)}
        if set(self.compose) != keys:
            raise ArtifactError("composition table must have 12 (frame, pBS, pRB) keys")
        if len(set(self.compose.values())) != 12:
            raise ArtifactError("composition table is not a bijection onto the 12 states")
        self.classes = {s: k for k, s in self.compose.items()}
        self.parity = [0] * 12
        for s, (_, x, y) in self.classes.items():
            self.parity[s.index] = (x + y) % 2
        for s in ALL_STATES:
            if self.parity[s.index] == self.parity[reflect(s).index]:
                raise ArtifactError("parity does not separate the two chiralities")
            if self.parity[s.index] != self.parity[rotate(s).index]:
                raise ArtifactError("parity is not rotation invariant")
        if not self.digest:
            self.digest = self.compute_digest()

    # serialisation
    def body_lines(self) -> list[str]:
        f = self.base.text_fields()
        out = [HEADER, "edge-bits " + f["edge-bits"], "chords " + f["chords"],
               "colors " + f["colors"]]
        for k in sorted(self.compose):
            out.append("compose %d %d %d %s" % (*k, self.compose[k]))
        for c in sorted(self.centers):
            out.append(f"center s{c} {self.centers[c]}")
        for (letter, barred) in sorted(self.hexmap):
            out.append(f"hexmap {letter}{'~' if barred else ''} {self.hexmap[(letter, barred)]}")
        for (half, side) in sorted(self.placements):
            out.append(f"place {half} {side} {self.placements[(half, side)]:+d}")
        return out

    def compute_digest(self) -> str:
        text = "\n".join(self.body_lines()) + "\n"
        return "sha256:" + hashlib.sha256(text.encode()).hexdigest()

    def dumps(self) -> str:
        return "\n".join(self.body_lines() + [f"digest {self.compute_digest()}"]) + "\n"

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    def hex_state(self, letter: str, barred: bool) -> TileState:
        try:
            return self.hexmap[(letter, barred)]
        except KeyError:
            raise ArtifactError("artifact has no hexagon mapping for "
                                f"{letter}{'~' if barred else ''}") from None


def loads(text: str) -> Artifact:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0] != HEADER:
        raise ArtifactError(f"expected header {HEADER!r}")
    bits = chords = cols = None
    compose, centers, hexmap, place = {}, {}, {}, {}
    digest = None
    for no, ln in enumerate(lines[1:], start=2):
        tag, *rest = ln.split()
        try:
            if tag == "edge-bits":
                bits = tuple(int(x) for x in rest)
            elif tag == "chords":
                chords = tuple(tuple(int(v) for v in tok.split(":")[0].split("-")) for tok in rest)
            elif tag == "colors":
                cols = tuple(COLOR_NAMES.index(x) for x in rest)
            elif tag == "compose":
                n, x, y = (int(v) for v in rest[:3])
                compose[(n, x, y)] = TileState.parse(rest[3])
            elif tag == "center":
                centers[int(rest[0].lstrip("s"))] = TileState.parse(rest[1])
            elif tag == "hexmap":
                name = rest[0]
                hexmap[(name[0], name.endswith("~"))] = TileState.parse(rest[1])
            elif tag == "place":
                place[(rest[0], int(rest[1]))] = int(rest[2])
            elif tag == "digest":
                digest = rest[0]
            else:
                raise ArtifactError(f"line {no}: unknown field {tag!r}")
        except (ValueError, IndexError) as e:
            if isinstance(e, ArtifactError):
                raise
            raise ArtifactError(f"line {no}: {e}") from e
    if bits is None or chords is None or cols is None:
        raise ArtifactError("missing base decoration fields")
    art = Artifact(Decoration(bits, chords, cols), compose, centers, hexmap,
                   place or dict(DEFAULT_PLACEMENTS))
    if digest is not None and digest != art.digest:
        raise ArtifactError(f"digest mismatch: file says {digest}, content is {art.digest}")
    return art


def load(path) -> Artifact:
    with open(path) as fh:
        return loads(fh.read())


def default_path() -> str:
    env = os.environ.get("HEXWEAVE_DEC")
    if env:
        return env
    return str(resources.files("hexweave").joinpath("data/default.dec"))


@lru_cache(maxsize=8)
def _load_cached(path: str, mtime: float) -> Artifact:
    return load(path)


def default_artifact() -> Artifact:
    path = default_path()
    try:
        mtime = os.path.getmtime(path)
    except OSError as e:
        raise ArtifactError(f"cannot read decoration artifact {path}: {e}") from e
    return _load_cached(path, mtime)


def resolve(art=None) -> Artifact:
    return default_artifact() if art is None else art
