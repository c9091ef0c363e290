"""Deterministic SVG rendering of tile patches.

Units: hexagon circumradius 1, SVG y axis pointing down (lattice y is
flipped).  Elements are emitted in sorted cell order so identical inputs give
byte-identical files.
"""
from __future__ import annotations

from .artifact import resolve
from .lattice import SQRT3, Patch, parity_of, position

LAYERS = ("stripes", "diameters", "parity", "rings")
DEFAULT_LAYERS = ("parity", "stripes", "diameters")
COLORS = {0: "#d62728", 1: "#1f4fd6"}
PARITY_FILL = {0: "#ffffff", 1: "#b8b8b8"}


class RenderError(ValueError):
    pass


def parse_layers(text: str | None):
    if text is None:
        return DEFAULT_LAYERS
    out = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [x for x in out if x not in LAYERS]
    if bad:
        raise RenderError(f"unknown layer(s): {', '.join(bad)}; choose from {', '.join(LAYERS)}")
    return out


def _xy(p):
    x, y = position(p)
    return SQRT3 * x, -SQRT3 * y


def _corner(c, k):
    import math
    t = math.radians(60 * k - 30)
    return c[0] + math.cos(t), c[1] - math.sin(t)


def _lerp(u, v, t):
    return u[0] + (v[0] - u[0]) * t, u[1] + (v[1] - u[1]) * t


def _f(x):
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _pt(q):
    return f"{_f(q[0])},{_f(q[1])}"


def render_svg(patch: Patch, layers=DEFAULT_LAYERS, art=None, rings=None) -> str:
    art = resolve(art)
    table = art.table
    layers = tuple(layers)
    for x in layers:
        if x not in LAYERS:
            raise RenderError(f"unknown layer {x!r}")
    cells = sorted(patch.cells)
    if cells:
        pts = [_xy(p) for p in cells]
        x0 = min(x for x, _ in pts) - 1.2
        y0 = min(y for _, y in pts) - 1.2
        w = max(x for x, _ in pts) + 1.2 - x0
        h = max(y for _, y in pts) + 1.2 - y0
    else:
        x0 = y0 = 0.0
        w = h = 1.0
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(x0)} {_f(y0)} {_f(w)} {_f(h)}">',
           f'<!-- hexweave artifact {art.digest} layers {",".join(layers) or "none"} -->']
    out.append('<g id="tiles" fill="none" stroke="#555555" stroke-width="0.03">')
    for p in cells:
        c = _xy(p)
        poly = " ".join(_pt(_corner(c, k)) for k in range(6))
        fill = ""
        if "parity" in layers:
            fill = f' fill="{PARITY_FILL[parity_of(patch.cells[p], art)]}"'
        out.append(f'<polygon points="{poly}"{fill}/>')
    out.append("</g>")
    if "diameters" in layers:
        out.append('<g id="diameters" stroke-width="0.08" stroke-linecap="round">')
        for p in cells:
            c = _xy(p)
            cols = table.cols[patch.cells[p].index]
            for k in range(6):
                q = _lerp(c, _corner(c, k), 0.85)
                out.append(f'<line x1="{_f(c[0])}" y1="{_f(c[1])}" x2="{_f(q[0])}" y2="{_f(q[1])}" '
                           f'stroke="{COLORS[cols[k]]}"/>')
        out.append("</g>")
    if "stripes" in layers:
        out.append('<g id="stripes" fill="none" stroke="#000000" stroke-width="0.1">')
        for p in cells:
            c = _xy(p)
            d = table.decs[patch.cells[p].index]
            for x, y in d.chords:
                px = _crossing(c, x, d.edge_bits[x])
                py = _crossing(c, y, d.edge_bits[y])
                if (y - x) % 6 in (1, 5):
                    hi = y if (y - x) % 6 == 1 else x
                    ctl = _corner(c, hi)
                    out.append(f'<path d="M{_pt(px)} Q{_pt(ctl)} {_pt(py)}"/>')
                else:
                    out.append(f'<line x1="{_f(px[0])}" y1="{_f(px[1])}" x2="{_f(py[0])}" y2="{_f(py[1])}"/>')
        out.append("</g>")
    if "rings" in layers:
        from .cht import small_ring_vertices
        from .lattice import corner_position
        verts = small_ring_vertices(patch, art) if rings is None else rings
        out.append('<g id="rings" fill="none" stroke="#000000" stroke-width="0.06">')
        for a, b, k in sorted(verts):
            x, y = corner_position((a, b), k)
            out.append(f'<circle cx="{_f(SQRT3 * x)}" cy="{_f(-SQRT3 * y)}" r="0.33"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _crossing(c, k, bit):
    """Where the stripe crosses edge k: a third of the way from the nearer corner."""
    u, v = _corner(c, k), _corner(c, k + 1)
    return _lerp(u, v, 2 / 3 if bit else 1 / 3)
