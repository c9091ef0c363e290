"""Patch files.

    hexweave-patch/1
    # artifact sha256:...          (optional comments)
    topology planar                (or: topology torus A B D)
    a b rot chi                    (one record per cell)
"""
from __future__ import annotations

from .lattice import Patch, TileState, Torus

PATCH_HEADER = "hexweave-patch/1"


class FormatError(ValueError):
    def __init__(self, msg, line: int | None = None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


def dumps_patch(patch: Patch, comments=()) -> str:
    out = [PATCH_HEADER]
    out += [f"# {c}" for c in comments]
    out.append("topology " + patch.topology)
    for p in sorted(patch.cells):
        s = patch.cells[p]
        out.append(f"{p[0]} {p[1]} {s.rot} {s.chi}")
    return "\n".join(out) + "\n"


def loads_patch(text: str) -> Patch:
    lines = text.splitlines()
    if not lines or lines[0].strip() != PATCH_HEADER:
        raise FormatError(f"expected header {PATCH_HEADER!r}", 1)
    torus, cells, seen_topo = None, {}, False
    for no, raw in enumerate(lines[1:], start=2):
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        t = ln.split()
        if t[0] == "topology":
            if seen_topo:
                raise FormatError("duplicate topology line", no)
            seen_topo = True
            if t[1:] == ["planar"]:
                torus = None
            elif len(t) == 5 and t[1] == "torus":
                try:
                    torus = Torus(*(int(x) for x in t[2:]))
                except ValueError as e:
                    raise FormatError(f"bad torus: {e}", no) from None
            else:
                raise FormatError(f"bad topology {' '.join(t[1:])!r}", no)
            continue
        if len(t) != 4:
            raise FormatError(f"expected 'a b rot chi', got {ln!r}", no)
        try:
            a, b, rot = int(t[0]), int(t[1]), int(t[2])
        except ValueError:
            raise FormatError(f"non-integer field in {ln!r}", no) from None
        if not 0 <= rot < 6 or t[3] not in ("L", "R"):
            raise FormatError(f"bad tile state {t[2]} {t[3]}", no)
        if (a, b) in cells:
            raise FormatError(f"duplicate cell {a} {b}", no)
        cells[(a, b)] = TileState(rot, t[3])
    try:
        return Patch(cells, torus)
    except ValueError as e:
        raise FormatError(str(e)) from None


def save_patch(patch: Patch, path, comments=()):
    with open(path, "w") as fh:
        fh.write(dumps_patch(patch, comments))


def load_patch(path) -> Patch:
    with open(path) as fh:
        return loads_patch(fh.read())
