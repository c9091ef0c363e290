import json

import pytest
from hypothesis import given, strategies as st

from hexweave.cht import build_patch
from hexweave.cli import main
from hexweave.io import FormatError, dumps_patch, load_patch, loads_patch, save_patch
from hexweave.lattice import ALL_STATES, Patch, TileState, Torus
from hexweave.render import RenderError, parse_layers, render_svg

cells = st.dictionaries(st.tuples(st.integers(-30, 30), st.integers(-30, 30)),
                        st.sampled_from(ALL_STATES), max_size=40)


@given(cells)
def test_patch_roundtrip(c):
    p = Patch(c)
    q = loads_patch(dumps_patch(p, ["note"]))
    assert dict(q.cells) == dict(p.cells) and q.torus is None


def test_torus_roundtrip():
    p = Patch({(0, 0): ALL_STATES[3], (1, 0): ALL_STATES[5]}, Torus(2, 0, 1))
    q = loads_patch(dumps_patch(p))
    assert q.torus == Torus(2, 0, 1) and dict(q.cells) == dict(p.cells)


@pytest.mark.parametrize("text,line", [
    ("junk\n", 1),
    ("hexweave-patch/1\n0 0 0 R\n0 0 1 R\n", 3),
    ("hexweave-patch/1\n0 x 0 R\n", 2),
    ("hexweave-patch/1\n0 0 7 R\n", 2),
    ("hexweave-patch/1\n0 0 0 Q\n", 2),
    ("hexweave-patch/1\ntopology sphere\n", 2),
    ("hexweave-patch/1\n0 0 0\n", 2),
])
def test_format_errors(text, line):
    with pytest.raises(FormatError) as ei:
        loads_patch(text)
    assert ei.value.line == line


@pytest.fixture
def small(tmp_path):
    path = tmp_path / "p.patch"
    save_patch(build_patch(6), path)
    return path


def test_generate_and_validate(tmp_path, capsys):
    out = tmp_path / "g.patch"
    assert main(["generate", "--radius", "8", "--out", str(out), "--json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["cells"] == 217 and rec["failures"] == 0
    assert len(load_patch(out)) == 217
    assert main(["validate", str(out)]) == 0
    assert main(["generate", "--rhombus", "4x3", "--out", str(tmp_path / "r.patch")]) == 0


def test_generate_usage_errors():
    assert main(["generate"]) == 2
    assert main(["generate", "--rhombus", "4by3"]) == 2
    assert main(["generate", "--radius", "2", "--central", "zz"]) == 2
    with pytest.raises(SystemExit) as ei:
        main(["generate", "--s-choice", "3"])
    assert ei.value.code == 2


def test_validate_mutation(small, capsys):
    p = load_patch(small)
    s = p.at((0, 0))
    save_patch(p.replace({(0, 0): TileState((s.rot + 1) % 6, s.chi)}), small)
    assert main(["validate", str(small)]) == 1
    assert "violation" in capsys.readouterr().out


def test_validate_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.patch"
    bad.write_text("hexweave-patch/1\n0 0 0 R\n0 0 2 L\n")
    assert main(["validate", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err
    assert main(["validate", str(tmp_path / "missing.patch")]) == 2
    assert main(["validate", str(bad), "--rules", "r9"]) == 2


def test_refute_torus_cli(tmp_path, capsys):
    assert main(["refute-torus", "--max-area", "4", "--json"]) == 0
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines() if x.startswith("{")]
    assert lines
    ce = tmp_path / "ce.patch"
    assert main(["refute-torus", "--max-area", "6", "--budget", "1",
                 "--counterexample", str(ce)]) == 1


def test_inflate_compose_cli(tmp_path, capsys):
    hh = tmp_path / "a.hh"
    assert main(["inflate", "--symbol", "A_L", "--steps", "3", "--out", str(hh)]) == 0
    assert main(["compose", str(hh), "--steps", "3"]) == 0
    assert "A_L" in capsys.readouterr().out
    hp = tmp_path / "a.patch"
    assert main(["to-hexagons", str(hh), "--out", str(hp)]) == 0
    assert main(["validate", str(hp)]) == 0
    assert main(["inflate", "--symbol", "Q_L"]) == 2


def test_parity_islands_ray(small, tmp_path, capsys):
    pbm = tmp_path / "f.pbm"
    assert main(["parity", str(small), "--pbm", str(pbm)]) == 0
    assert pbm.read_text().startswith("P1")
    assert main(["islands", str(small), "--json"]) == 0
    assert main(["ray", "--index", "0", "--length", "15"]) == 0
    assert main(["ray", "--index", "12"]) == 2


def test_extract_pee_cli(small):
    assert main(["extract-pee", str(small), "--sublattice", "2"]) == 0
    assert main(["extract-pee", str(small), "--sublattice", "5"]) == 2


def test_render_cli(small, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["render", str(small), "--out", str(a), "--layers", "parity,rings"]) == 0
    assert main(["render", str(small), "--out", str(b), "--layers", "parity,rings"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["render", str(small), "--out", str(a), "--layers", "glitter"]) == 2


def test_svg_deterministic_and_layers():
    p = build_patch(3)
    svg = render_svg(p, ("stripes", "diameters", "parity", "rings"))
    assert svg == render_svg(build_patch(3), ("stripes", "diameters", "parity", "rings"))
    assert svg.count("<polygon") == len(p) == 37
    assert svg.count("<line") + svg.count("<path") == 37 * 6 + 37 * 3
    assert 'id="rings"' in svg


def test_empty_svg():
    svg = render_svg(Patch({}), ())
    assert 'viewBox="0 0 1 1"' in svg and "<polygon" not in svg
    with pytest.raises(RenderError):
        parse_layers("stripes,nope")
    with pytest.raises(RenderError):
        render_svg(Patch({}), ("nope",))


def test_solver_commands(small):
    assert main(["verify-rings", "--sample", "20"]) == 0
    assert main(["grow-defect", "--radius", "4"]) == 1
    assert main(["uniformity", str(small), "--r", "1", "--min-count", "1"]) == 0


def test_self_derive_cli(tmp_path):
    out = tmp_path / "d.dec"
    assert main(["self-derive", "--out", str(out), "--radius", "16"]) == 0
    from hexweave.artifact import default_path
    assert out.read_text() == open(default_path()).read()


def test_bad_dec(small, tmp_path):
    bad = tmp_path / "x.dec"
    bad.write_text("nonsense\n")
    assert main(["validate", str(small), "--dec", str(bad)]) == 2
