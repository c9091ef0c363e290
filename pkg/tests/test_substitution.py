import pytest
from hypothesis import given, settings, strategies as st

from hexweave.lattice import neighbor, validate
from hexweave.substitution import (
    ALL_SYMBOLS, HalfHexPatch, HexCell, IllegalPair, PartitionViolation,
    SIDES, Slot, Symbol, UnknownArrangement, c_lattice_ok, children, complete, compose_unique,
    decompose, dumps_hh, forbidden_arrangements, glugon_partition, hex_edge_side,
    hex_to_tile_state, hexagons_to_patch, inflate, is_forbidden, loads_hh, seed, to_hexagons,
)

syms = st.sampled_from(ALL_SYMBOLS)
S = Symbol.parse


def test_alphabet():
    assert len(ALL_SYMBOLS) == 28 == len(set(ALL_SYMBOLS))
    for x in ALL_SYMBOLS:
        assert S(str(x)) == x
        assert x.mirror().mirror() == x
    assert S("Ā_L") == Symbol("A", "L", True)
    with pytest.raises(ValueError):
        S("H_L")


def test_table_examples():
    c, kids = decompose(S("A_L"))
    assert c == S("C_L")
    assert [kids[s] for s in (6, 5, 4)] == [S("G_R"), S("D_R"), S("G~_L")]
    c, kids = decompose(S("C_R"))
    assert c == S("C_R")
    assert [kids[s] for s in (1, 2, 3)] == [S("D_L"), S("E_L"), S("D~_R")]


@given(syms)
def test_decompose_mirror_equivariant(x):
    c, kids = decompose(x)
    mc, mkids = decompose(x.mirror())
    assert mc == c.mirror()
    assert sorted(map(str, mkids.values())) == sorted(str(k.mirror()) for k in kids.values())


def test_forbidden_triples():
    forb = forbidden_arrangements()
    assert len(forb) == 4
    for c, kids in forb:
        assert is_forbidden(c, kids)
    for x in ALL_SYMBOLS:
        assert not is_forbidden(*decompose(x))


@given(syms, st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_inflate_counts_and_scale(x, n):
    p = inflate(seed(x), n)
    assert len(p.core) == 4 ** n
    assert all(p.cells[s].partner() == p.cells[s.partner()] for s in p.cells)
    cs = [s for s in p.core if p.cells[s].letter == "C"]
    # C children sit on the doubled lattice
    assert c_lattice_ok({s.hex: HexCell("C", False, 0) for s in cs})


def test_inflate_one_step_matches_table(art):
    p = inflate(seed(S("A_L")), 1)
    core = p.core_cells()
    c, kids = decompose(S("A_L"))
    assert sorted(map(str, core.values())) == sorted(map(str, [c, *kids.values()]))
    slot = Slot(0, 0, 3)
    assert sorted(children(slot, S("A_L"), art)) == sorted(core.items())
    with pytest.raises(ValueError):
        inflate(seed(S("A_L")), 0)


def test_scale_factor_two(art):
    for x in ALL_SYMBOLS:
        slot = Slot(3, -2, 3 if x.half == "L" else 0)
        out = children(slot, x, art)
        assert out[0][0] == Slot(6, -4, slot.u)
        for s, _ in out[1:]:
            assert max(abs(s.a - 6), abs(s.b + 4), abs(s.a - 6 - s.b - 4)) == 1


@pytest.mark.parametrize("x", ALL_SYMBOLS, ids=str)
def test_round_trip_five_steps(x):
    p = inflate(seed(x, at=(1, -1)), 5)
    for _ in range(5):
        p = compose_unique(p).patch
    assert list(p.cells.values()) == [x]


def test_compose_flags_forbidden():
    c, kids = forbidden_arrangements()[0]
    at = Slot(0, 0, 3)
    cells = {at: c}
    from hexweave.substitution import side_edge
    for side, k in kids.items():
        e = side_edge(c.half, at.u, side)
        q = neighbor((0, 0), e)
        cells[Slot(q[0], q[1], (e + 3) % 6)] = k
    with pytest.raises(UnknownArrangement):
        compose_unique(HalfHexPatch(cells))


def test_compose_unknown_row():
    p = inflate(seed(S("A_L")), 1)
    cells = dict(p.core_cells())
    k = next(s for s, x in cells.items() if x.letter != "C")
    cells[k] = S("E~_R") if cells[k] != S("E~_R") else S("F_R")
    with pytest.raises(UnknownArrangement):
        compose_unique(HalfHexPatch(cells))


def test_to_hexagons_pairs():
    good = HalfHexPatch({Slot(0, 0, 3): S("A_L"), Slot(0, 0, 0): S("A_R")})
    assert to_hexagons(good) == {(0, 0): HexCell("A", False, 0)}
    bar = HalfHexPatch({Slot(0, 0, 3): S("A~_L"), Slot(0, 0, 0): S("A~_R")})
    assert to_hexagons(bar)[(0, 0)].barred
    with pytest.raises(IllegalPair, match="excluded"):
        to_hexagons(HalfHexPatch({Slot(0, 0, 3): S("C_L"), Slot(0, 0, 0): S("E_R")}))
    with pytest.raises(IllegalPair):
        to_hexagons(HalfHexPatch({Slot(0, 0, 3): S("A_L")}), strict_complete=True)


def test_mirrored_hexagon_reflected_state(art):
    for x in "ABCDEFG":
        s = hex_to_tile_state(HexCell(x, False, 0), art)
        t = hex_to_tile_state(HexCell(x, True, 0), art)
        assert s.chi != t.chi


@pytest.mark.parametrize("x", ["A_L", "C~_R", "E_L"])
def test_inflation_maps_to_valid_tiles(x, art):
    hexes = to_hexagons(inflate(seed(S(x)), 5))
    patch = hexagons_to_patch(hexes, art)
    assert validate(patch, table=art.table).clean


def test_side_one_matching():
    hexes = to_hexagons(inflate(seed(S("A_L")), 5))
    for h, cell in hexes.items():
        for e in range(6):
            q = neighbor(h, e)
            if q in hexes and hex_edge_side(cell, e) == 1:
                assert hex_edge_side(hexes[q], e + 3) in (6, 5, 3)


def test_glugon_partition_of_inflation():
    hexes = to_hexagons(inflate(seed(S("A_L")), 5))
    res = glugon_partition(hexes)
    glugons = [p for p in res["polyhexes"] if p.kind == "glugon"]
    assert glugons
    for g in glugons:
        kinds = sorted((hexes[h].letter, hexes[h].barred) for h in g.cells)
        assert kinds in ([("A", False), ("B", False), ("G", True)],
                         [("A", True), ("B", True), ("G", False)])
    owned = {h for p in res["polyhexes"] for h in p.cells}
    assert owned.isdisjoint(res["unassigned"])
    assert c_lattice_ok(hexes)


def test_partition_violation_isolated_a():
    hexes = {(0, 0): HexCell("A", False, 0)}
    for k in range(6):
        hexes[neighbor((0, 0), k)] = HexCell("D", False, 0)
    with pytest.raises(PartitionViolation):
        glugon_partition(hexes)


def test_hh_roundtrip():
    p = inflate(seed(S("B~_R")), 2)
    q = loads_hh(dumps_hh(p))
    assert q.cells == p.cells and q.core == p.core
    with pytest.raises(ValueError):
        loads_hh("bad\n")


def test_complete_adds_partners():
    core = {Slot(0, 0, 3): S("D_L")}
    assert complete(core) == {Slot(0, 0, 0): S("D_R")}
    assert SIDES["L"] == (6, 5, 4)
