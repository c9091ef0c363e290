import math

import pytest
from hypothesis import given, strategies as st

from hexweave.cht import (
    CENTRAL, ChtConfig, FrameDecomp, Q, S_CHOICES, SpokeCase, build_patch, build_rhombus,
    cht_state, classes_at, frame_of, frame_point, level_census, level_fractions, level_of,
    p_bs, p_rb, parity_at, ray_point, ring_vertex_oracle, small_ring_vertices, spoke_of,
    stripe_triangles,
)
from hexweave.lattice import ALL_STATES, Patch, TileState, disk, parity_of, validate

nonzero = st.tuples(st.integers(-300, 300), st.integers(-300, 300)).filter(lambda p: p != (0, 0))


def test_q_examples():
    assert Q(1) == 1 and Q(12) == 4 and Q(8) == 8
    assert Q(0) == math.inf
    assert all(Q(k) == math.gcd(2 ** k, k) for k in range(1, 200))


def test_level_examples():
    assert level_of((1, 0)) == 1
    assert level_of((2, 2)) == 2
    assert level_of((4, 0)) == 3
    assert level_of((0, 0)) == CENTRAL


def test_frame_examples():
    assert tuple(frame_of((1, 0))) == (3, -1, -1)
    assert tuple(frame_of((3, 1))) == (2, 1, 3)
    with pytest.raises(ValueError):
        frame_of((0, 0))


@given(nonzero)
def test_frame_decomposition_valid(p):
    f = frame_of(p)
    assert frame_point(f) == p
    assert Q(abs(f.i)) == Q(abs(f.j))


def test_frame_unique_on_disk():
    for p in disk(64):
        if p == (0, 0):
            continue
        sols = []
        for n in (1, 2, 3):
            for cand in _solve(n, p):
                if Q(abs(cand.i)) == Q(abs(cand.j)):
                    sols.append(cand)
        assert sols == [frame_of(p)]


def _solve(n, p):
    from hexweave.cht import FRAME_AXES
    (x1, y1), (x2, y2) = FRAME_AXES[n]
    det = x1 * y2 - x2 * y1
    i = (p[0] * y2 - p[1] * x2) // det
    j = (x1 * p[1] - y1 * p[0]) // det
    f = FrameDecomp(n, i, j)
    return [f] if frame_point(f) == tuple(p) else []


def test_pbs_prb_hand_values():
    assert (p_bs(1, 3), p_rb(1, 3)) == (0, 0)
    assert (p_bs(3, 1), p_rb(3, 1)) == (1, 0)
    with pytest.raises(SpokeCase):
        p_bs(2, 2)
    with pytest.raises(SpokeCase):
        p_rb(2, -2)


def test_parity_at_examples(art):
    assert parity_at((3, 1), art=art) == 0
    assert parity_at((1, 3), art=art) == 1
    for c in (1, 2):
        cfg = ChtConfig(c)
        assert parity_at((0, 0), cfg, art) == parity_of(cfg.central_state(art), art)


@pytest.mark.parametrize("h", [1, 2, 3, 4, 6, 8, 12, 16])
def test_rows_of_fixed_h(h):
    # along a row j - i = h, valid frame sites come in runs of Q(h) - 1
    valid = []
    for i in range(1, 200):
        f = FrameDecomp(2, i, i + h)
        valid.append(frame_of(frame_point(f)) == f)
    q = Q(h)
    for i in range(1, 200):
        assert valid[i - 1] == (i % q != 0)
    runs = {}
    for i in range(1, 200):
        if i % q:
            runs.setdefault(i // q, set()).add(p_bs(i, i + h))
    assert all(len(v) == 1 for v in runs.values())


@given(nonzero)
def test_parity_at_matches_state(art, p):
    for c in (1, 2):
        cfg = ChtConfig(c)
        assert parity_at(p, cfg, art) == parity_of(cht_state(p, cfg, art), art)


@given(nonzero)
def test_spoke_free_independence(art, p):
    if spoke_of(p) is None:
        assert cht_state(p, ChtConfig(1), art) == cht_state(p, ChtConfig(2), art)


def test_spoke_sites_counted():
    for d in range(1, 20):
        for ray in range(12):
            sp = spoke_of(ray_point(ray, d))
            assert sp is not None and sp.ray == ray and sp.d == d


def test_stripe_classes_parallel_per_frame(art):
    for n in (1, 2, 3):
        axes = {art.table[art.compose[(n, x, y)]].long_chord() for x in (0, 1) for y in (0, 1)}
        axes = {tuple(sorted((c[0] % 3, c[1] % 3))) for c in axes}
        assert len(axes) == 1


def test_build_patch_small():
    p0 = build_patch(0)
    assert len(p0) == 1 and p0.at((0, 0)) == ChtConfig().central_state()
    with pytest.raises(ValueError):
        build_patch(-1)


def test_radius_64_clean(patch64):
    assert len(patch64) == 12481
    assert validate(patch64).failures == 0


def test_radius_32_both_choices(art):
    for c in (1, 2):
        assert validate(build_patch(32, ChtConfig(c), art)).clean


def test_rhombus_parity(art):
    for c in (1, 2):
        cfg = ChtConfig(c)
        patch = build_rhombus(128, 128, cfg, art)
        assert len(patch) == 128 * 128
        bad = sum(parity_of(s, art) != parity_at(p, cfg, art) for p, s in patch.cells.items())
        assert bad == 0


def test_level_fractions(patch64):
    fr = level_fractions(patch64)
    assert abs(fr[1] - 0.75) <= 2 / 64
    assert abs(fr[2] - 0.1875) <= 0.01
    assert abs(sum(fr.values()) - 1) < 1e-12
    c = level_census(patch64)
    assert c[CENTRAL] == 1


def test_ring_vertices_equal_oracle(patch64):
    sub = build_patch(24)
    rings = small_ring_vertices(sub)
    assert rings == ring_vertex_oracle(sub)
    assert rings


def test_ring_mutation():
    sub = build_patch(10)
    base = small_ring_vertices(sub)
    s = sub.at((1, 0))
    mutated = sub.replace({(1, 0): TileState((s.rot + 1) % 6, s.chi)})
    changed = base ^ small_ring_vertices(mutated)
    assert changed and all(max(abs(a), abs(b)) <= 3 for a, b, _ in changed)


def test_empty_ring_and_loops():
    assert small_ring_vertices(Patch({})) == set()
    one = Patch({(0, 0): ALL_STATES[0]})
    assert sum(stripe_triangles(one)["loops"].values()) == 0


def test_stripe_loops_radius_32(patch32):
    res = stripe_triangles(patch32)
    assert {1, 2, 4, 8} <= set(res["loops"])
    assert res["odd"] == 0


def test_config_check(art):
    ChtConfig(1).check(art)
    bad = TileState(0, "R")
    with pytest.raises(ValueError):
        ChtConfig(1, bad).check(art)
    with pytest.raises(ValueError):
        ChtConfig(3)
    assert set(S_CHOICES) == {1, 2}


def test_classes_in_range():
    for p in disk(12):
        if p != (0, 0):
            n, x, y = classes_at(p, ChtConfig())
            assert n in (1, 2, 3) and x in (0, 1) and y in (0, 1)
