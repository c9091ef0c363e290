"""hexweave command line.

Exit codes: 0 success / clean, 1 check failed (violations, inconclusive
search, no unique derivation), 2 usage or file-format errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, record: dict, text: str):
    if args.json:
        print(json.dumps(record, sort_keys=True, default=str))
    else:
        print(text)


def _art(args):
    from .artifact import ArtifactError, default_artifact, load
    try:
        return load(args.dec) if args.dec else default_artifact()
    except (OSError, ArtifactError) as e:
        raise UsageError(f"cannot load decoration artifact: {e}") from None


def _read_patch(path):
    from .io import FormatError, load_patch
    try:
        return load_patch(path)
    except OSError as e:
        raise UsageError(str(e)) from None
    except FormatError as e:
        raise UsageError(f"{path}: {e}") from None


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cfg(args, art):
    from .cht import ChtConfig
    from .lattice import TileState
    central = None
    if getattr(args, "central", None):
        try:
            central = TileState.parse(args.central)
        except ValueError as e:
            raise UsageError(f"bad --central: {e}") from None
    cfg = ChtConfig(args.s_choice, central)
    try:
        cfg.check(art)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return cfg


def _rules(text):
    rules = tuple(r.strip().upper() for r in text.split(",") if r.strip())
    bad = [r for r in rules if r not in ("R1", "R2", "R3")]
    if bad or not rules:
        raise UsageError(f"bad --rules {text!r}; use a comma list of r1,r2,r3")
    return rules


def _report_text(rep):
    lines = [rep.summary()]
    for v in rep.violations[:50]:
        lines.append("  violation " + " ".join(str(x) for x in v))
    if len(rep.violations) > 50:
        lines.append(f"  ... {len(rep.violations) - 50} more")
    return "\n".join(lines)


# -- commands ---------------------------------------------------------------

def cmd_generate(args):
    from .cht import build_patch, build_rhombus
    from .io import dumps_patch
    from .lattice import validate
    art = _art(args)
    cfg = _cfg(args, art)
    if args.rhombus:
        try:
            m, n = (int(x) for x in args.rhombus.lower().split("x"))
        except ValueError:
            raise UsageError("--rhombus expects MxN") from None
        if m < 1 or n < 1:
            raise UsageError("--rhombus sides must be positive")
        patch = build_rhombus(m, n, cfg, art)
    else:
        if args.radius is None or args.radius < 0:
            raise UsageError("--radius R >= 0 or --rhombus MxN is required")
        patch = build_patch(args.radius, cfg, art)
    rep = validate(patch, ("R1", "R2", "R3"), art.table)
    _write(args.out, dumps_patch(patch, [f"artifact {art.digest}", f"s-choice {cfg.s_choice}",
                                         f"central {cfg.central_state(art)}"]))
    rec = {"cells": len(patch), **rep.as_dict(), "artifact": art.digest}
    text = f"generated {len(patch)} cells\n{_report_text(rep)}"
    if args.out in (None, "-"):
        if args.json:
            print(json.dumps(rec, sort_keys=True), file=sys.stderr)
        else:
            print(text, file=sys.stderr)
    else:
        _emit(args, rec, text)
    return EXIT_OK if rep.clean else EXIT_FAIL


def cmd_validate(args):
    from .lattice import validate
    art = _art(args)
    rules = _rules(args.rules)
    patch = _read_patch(args.file)
    rep = validate(patch, rules, art.table)
    _emit(args, {"file": args.file, "cells": len(patch), **rep.as_dict()}, _report_text(rep))
    return EXIT_OK if rep.clean else EXIT_FAIL


def cmd_refute_torus(args):
    from .solver import refute_torus
    art = _art(args)
    if args.max_area < 1:
        raise UsageError("--max-area must be >= 1")
    if args.budget < 1:
        raise UsageError("--budget must be >= 1")
    path = args.dec or os.environ.get("HEXWEAVE_DEC") or None
    recs = refute_torus(args.max_area, args.budget, art, args.jobs, path)
    bad = [r for r in recs if r.verdict != "unsatisfiable"]
    for r in recs:
        d = r.as_dict()
        if args.json:
            print(json.dumps(d, sort_keys=True))
        else:
            print(f"basis {d['basis']} index {d['index']}: {d['verdict']} nodes {d['nodes']} {d['millis']:.1f} ms")
    sat = [r for r in recs if r.verdict == "satisfiable"]
    if sat:
        from .io import dumps_patch
        from .lattice import Patch, Torus
        r = sat[0]
        t = Torus(r.basis[0][0], r.basis[1][0], r.basis[1][1])
        text = dumps_patch(Patch(r.solution, t), [f"artifact {art.digest}", "periodic counterexample"])
        _write(args.counterexample, text)
        print(f"counterexample written to {args.counterexample}", file=sys.stderr)
    if bad and not sat:
        print(f"{len(bad)} basis(es) inconclusive within a budget of {args.budget} nodes", file=sys.stderr)
    if not args.json:
        print(f"{len(recs)} bases, {len(recs) - len(bad)} unsatisfiable")
    return EXIT_OK if not bad else EXIT_FAIL


def _read_hh(path):
    from .substitution import loads_hh
    try:
        with open(path) as fh:
            return loads_hh(fh.read())
    except OSError as e:
        raise UsageError(str(e)) from None
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def cmd_inflate(args):
    from .substitution import HalfHexPatch, Symbol, dumps_hh, inflate, seed
    art = _art(args)
    try:
        sym = Symbol.parse(args.symbol)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    hh = inflate(seed(sym), args.steps, art)
    if not args.complete:
        hh = HalfHexPatch(hh.core_cells())
    _write(args.out, dumps_hh(hh))
    return EXIT_OK


def cmd_compose(args):
    from .substitution import SubstitutionError, compose_unique, dumps_hh
    art = _art(args)
    hh = _read_hh(args.file)
    try:
        for _ in range(args.steps):
            comp = compose_unique(hh, art)
            hh = comp.patch
    except SubstitutionError as e:
        print(f"composition failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    _write(args.out, dumps_hh(hh))
    return EXIT_OK


def cmd_to_hexagons(args):
    from .io import dumps_patch
    from .lattice import validate
    from .substitution import (HalfHexPatch, IllegalPair, complete, hexagons_to_patch,
                               to_hexagons)
    art = _art(args)
    hh = _read_hh(args.file)
    cells = dict(hh.cells)
    cells.update(complete(cells))
    try:
        hexes = to_hexagons(HalfHexPatch(cells))
    except IllegalPair as e:
        print(f"illegal pair: {e}", file=sys.stderr)
        return EXIT_FAIL
    patch = hexagons_to_patch(hexes, art)
    _write(args.out, dumps_patch(patch, [f"artifact {art.digest}", f"from {os.path.basename(args.file)}"]))
    rep = validate(patch, ("R1", "R2", "R3"), art.table)
    print(_report_text(rep), file=sys.stderr)
    return EXIT_OK if rep.clean else EXIT_FAIL


def cmd_parity(args):
    from .analysis import field_to_pbm, parity_field
    art = _art(args)
    patch = _read_patch(args.file)
    fld = parity_field(patch, art)
    ones = sum(fld.values())
    if args.pbm:
        _write(args.pbm, field_to_pbm(fld))
    _emit(args, {"cells": len(fld), "parity1": ones, "parity0": len(fld) - ones},
          f"{len(fld)} cells: {len(fld) - ones} of parity 0, {ones} of parity 1")
    return EXIT_OK


def cmd_islands(args):
    from .analysis import islands, parity_field
    art = _art(args)
    fld = parity_field(_read_patch(args.file), art)
    census = islands(fld)
    if args.json:
        for i in census.islands:
            print(json.dumps({"anchor": list(i.anchor()), "size": i.size, "parity": i.parity,
                              "interior": i.interior}, sort_keys=True))
        print(json.dumps(census.as_dict(), sort_keys=True))
    else:
        print(f"{len(census.islands)} components; llamas (interior, size 13): {len(census.llamas())}")
        for size, n in sorted(census.sizes().items()):
            print(f"  interior size {size}: {n}")
    return EXIT_OK


def cmd_ray(args):
    from .analysis import bits, paperfolding, spoke_sequence
    from .cht import ChtConfig
    art = _art(args)
    if args.length < 1:
        raise UsageError("--length must be >= 1")
    if not 0 <= args.index < 12:
        raise UsageError("--index must be 0..11")
    cfg = _cfg(args, art)
    seq = spoke_sequence(cfg, args.index, args.length, art)
    pf = paperfolding(args.length)
    match = "paperfolding" if seq == pf else "complement" if seq == [1 - b for b in pf] else "none"
    _emit(args, {"ray": args.index, "bits": bits(seq), "match": match},
          f"{bits(seq)}\nmatch: {match}")
    return EXIT_OK if match != "none" else EXIT_FAIL


def cmd_extract_pee(args):
    from .analysis import extract_pee
    art = _art(args)
    if args.sublattice not in (1, 2, 3):
        raise UsageError("--sublattice must be 1, 2 or 3")
    pee = extract_pee(_read_patch(args.file), args.sublattice, art)
    d = pee.as_dict()
    if args.json:
        print(json.dumps(d, sort_keys=True))
        for e in pee.failures():
            print(json.dumps({"discontinuity": list(e.source), "cell": list(e.cell)}))
    else:
        ok = "OK" if not pee.failures() else "BROKEN"
        print(f"sublattice {d['n']}: {d['cells']} big cells, {d['fillers']} gap fillers, "
              f"{d['edges_checked']} edges checked, continuity {ok}")
        for e in pee.failures()[:50]:
            print(f"  discontinuity at source edge {e.source}")
    return EXIT_OK if not pee.failures() else EXIT_FAIL


def cmd_render(args):
    from .render import RenderError, parse_layers, render_svg
    try:
        layers = parse_layers(args.layers)
    except RenderError as e:
        raise UsageError(str(e)) from None
    art = _art(args)
    svg = render_svg(_read_patch(args.file), layers, art)
    _write(args.out, svg)
    return EXIT_OK


def cmd_self_derive(args):
    from .derive import DeriveError, derive
    log = (lambda *a: print(*a, file=sys.stderr)) if args.json else print
    try:
        rep = derive(args.radius, args.corrupt, log=log)
    except DeriveError as e:
        print(f"self-derive failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    rec = {"examined": rep.examined, "structural": rep.structural, "tables": rep.tables,
           "off_spoke": rep.off_spoke, "survivors": len(rep.survivors), "classes": rep.classes,
           "hexmap_solutions": rep.hexmap_solutions}
    if rep.artifact is None:
        for s in rep.survivors:
            log("survivor: " + " | ".join(f"{k} {v}" for k, v in s.art.base.text_fields().items()))
        print(f"self-derive failed: {rep.classes} class(es) of survivors, "
              f"{rep.hexmap_solutions} hexagon mapping(s)", file=sys.stderr)
        if args.json:
            print(json.dumps(rec, sort_keys=True))
        return EXIT_FAIL
    rep.artifact.save(args.out)
    rec["digest"] = rep.artifact.digest
    _emit(args, rec, f"wrote {args.out}\n{rep.artifact.digest}")
    return EXIT_OK


def cmd_verify_rings(args):
    from .solver import verify_ring_forcing
    r = verify_ring_forcing(args.radius, args.sample, _art(args))
    _emit(args, r, "\n".join(f"{k}: {v}" for k, v in r.items()))
    return EXIT_OK if r["ok"] else EXIT_FAIL


def cmd_grow_defect(args):
    from .solver import grow_defect
    out = grow_defect(args.radius, art=_art(args), inner=args.inner)
    rec = {"radius": args.radius, "inner": out.info["inner"], "outcome": out.kind, "nodes": out.nodes,
           "search_required": out.info.get("search_required"),
           "undetermined": sorted(list(p) for p in out.info.get("alternatives", {})),
           "seed": out.info["seed"]}
    _emit(args, rec, "\n".join(f"{k}: {v}" for k, v in rec.items()))
    return EXIT_OK if out.kind == "determined" else EXIT_FAIL


def cmd_uniformity(args):
    from .solver import uniformity_check
    r = uniformity_check(_read_patch(args.file), args.r, args.min_count)
    _emit(args, r, "\n".join(f"{k}: {v}" for k, v in r.items()))
    return EXIT_OK if r["ok"] else EXIT_FAIL


# -- parser -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--dec", default=None, help="decoration artifact (default: $HEXWEAVE_DEC or the shipped one)")
    p = argparse.ArgumentParser(prog="hexweave", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hexweave {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    def cfg_flags(sp):
        sp.add_argument("--s-choice", type=int, choices=(1, 2), default=1)
        sp.add_argument("--central", default=None, help="central tile state, e.g. 0L")

    sp = add("generate", cmd_generate, "closed-form centred tiling patch")
    sp.add_argument("--radius", type=int)
    sp.add_argument("--rhombus", default=None, help="MxN rhombus instead of a disk")
    sp.add_argument("--out", "-o", default=None)
    cfg_flags(sp)

    sp = add("validate", cmd_validate, "check R1/R2/R3 on a patch file")
    sp.add_argument("file")
    sp.add_argument("--rules", default="r1,r2,r3")

    sp = add("refute-torus", cmd_refute_torus, "search every periodic quotient up to an index")
    sp.add_argument("--max-area", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10 ** 8)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--counterexample", default="counterexample.patch")

    sp = add("inflate", cmd_inflate, "half-hexagon substitution from one symbol")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--steps", type=int, default=1)
    sp.add_argument("--complete", action="store_true", help="add partner halves of incomplete hexagons")
    sp.add_argument("--out", "-o", default=None)

    sp = add("compose", cmd_compose, "unique composition of a half-hexagon file")
    sp.add_argument("file")
    sp.add_argument("--steps", type=int, default=1)
    sp.add_argument("--out", "-o", default=None)

    sp = add("to-hexagons", cmd_to_hexagons, "pair halves into decorated tiles")
    sp.add_argument("file")
    sp.add_argument("--out", "-o", default=None)

    sp = add("parity", cmd_parity, "parity field of a patch")
    sp.add_argument("file")
    sp.add_argument("--pbm", default=None, help="write the field as a plain PBM bitmap")

    sp = add("islands", cmd_islands, "constant-parity island census")
    sp.add_argument("file")

    sp = add("ray", cmd_ray, "parity sequence along a spoke")
    sp.add_argument("--index", type=int, required=True)
    sp.add_argument("--length", type=int, default=64)
    cfg_flags(sp)

    sp = add("extract-pee", cmd_extract_pee, "one-third sublattice extraction")
    sp.add_argument("file")
    sp.add_argument("--sublattice", type=int, required=True)

    sp = add("render", cmd_render, "SVG rendering")
    sp.add_argument("file")
    sp.add_argument("--out", "-o", required=True)
    sp.add_argument("--layers", default=None, help="comma list of stripes,diameters,parity,rings")

    sp = add("self-derive", cmd_self_derive, "derive the decoration artifact by exhaustive search")
    sp.add_argument("--out", "-o", required=True)
    sp.add_argument("--radius", type=int, default=16)
    sp.add_argument("--corrupt", choices=("R1", "R2", "R3"), default=None,
                    help="control run with one rule inverted")

    sp = add("verify-rings", cmd_verify_rings, "small-ring forcing checks")
    sp.add_argument("--radius", type=int, default=3)
    sp.add_argument("--sample", type=int, default=200)

    sp = add("grow-defect", cmd_grow_defect, "forced growth around a monochrome vertex")
    sp.add_argument("--radius", type=int, default=4)
    sp.add_argument("--inner", type=int, default=None)

    sp = add("uniformity", cmd_uniformity, "configuration repetition check")
    sp.add_argument("file")
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--min-count", type=int, default=3)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"hexweave {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
