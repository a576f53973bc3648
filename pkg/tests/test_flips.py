import numpy as np
import pytest

from rphtiling.flips import FlipMove, FlipState, apply_flip, classify_cycle, find_flips, monte_carlo_flips
from rphtiling.gpsp import WheelDiagram, acute_corners, gpsp_step_detailed, seed_tiling
from rphtiling.golden import TAU
from rphtiling.module import DIRECTIONS, MIRROR_MATRIX, mirror_x, perp_float
from rphtiling.tiling import H, P, R, UNKNOWN, Tiling, validate

L = WheelDiagram.uniform("L")


def test_single_tile_has_no_flips():
    assert find_flips(seed_tiling("R")) == []


def test_classify_cycle():
    walk = lambda ds: [tuple(int(x) for x in p) for p in np.cumsum(
        np.vstack([np.zeros((1, 4), dtype=np.int64), DIRECTIONS[ds[:-1]]]), axis=0)]
    assert classify_cycle(walk([0, 1, 5, 6])) == R
    assert classify_cycle(walk([0, 2, 4, 6, 8])) == P
    assert classify_cycle(walk([0, 2, 3, 5, 7, 8])) == H
    assert classify_cycle(walk([0, 3, 5, 8])) == UNKNOWN  # a fat rhombus is not a prototile


def test_move_validation():
    with pytest.raises(ValueError):
        FlipMove((0, 0, 0, 0), (1, 0, 0, 0))


def test_elimination_outcomes_are_one_flip_apart(tiling):
    t = tiling("R", depth=3)
    c = acute_corners(t)
    pos = t.positions()
    centre = pos.mean(axis=0)
    i = int(np.argmin(np.hypot(*(pos[c.apex] - centre).T)))
    apex, k = int(c.apex[i]), int(c.direction[i])
    a, _, _ = gpsp_step_detailed(t, L)
    b, _, _ = gpsp_step_detailed(t, L, override=lambda row, kk: "R" if (row, kk) == (apex, k) else None)
    assert validate(b).ok
    only_a = a.vertex_set() - b.vertex_set()
    only_b = b.vertex_set() - a.vertex_set()
    assert len(only_a) == len(only_b) == 1
    links = [m for m in find_flips(a) if m.vertex in only_a and m.target in only_b]
    assert len(links) == 1
    assert apply_flip(a, links[0]) == b


def test_moves_are_exact_and_involutive(tiling):
    t = tiling("R", depth=3)
    moves = find_flips(t)
    assert moves
    for m in moves:
        assert m.par_length_exact() and m.perp_length_exact()
    for m in moves[:25]:
        u = apply_flip(t, m)
        assert validate(u).ok
        assert u.counts() == t.counts()
        assert m.reversed() in find_flips(u)
        assert apply_flip(u, m.reversed()) == t
        d = perp_float(np.array([m.target])) - perp_float(np.array([m.vertex]))
        assert np.hypot(*d[0]) == pytest.approx(TAU, abs=1e-12)


def test_unavailable_move_rejected(tiling):
    t = tiling("R", depth=3)
    m = find_flips(t)[0]
    with pytest.raises(ValueError):
        apply_flip(t, FlipMove(m.vertex, tuple(-x for x in m.hop)))


def test_flips_mirror_equivariant(tiling):
    t = tiling("R", depth=3)
    mirrored = {FlipMove(mirror_x(m.vertex), mirror_x(m.hop)) for m in find_flips(t)}
    assert mirrored == set(find_flips(t.transformed(MIRROR_MATRIX)))


def test_incremental_state_matches_rebuild(tiling):
    t = tiling("R", depth=3)
    st = FlipState(t)
    rng = np.random.default_rng(3)
    for _ in range(60):
        v, hop = st.moves[int(rng.integers(len(st.moves)))]
        st.apply(v, hop)
    fresh = FlipState(Tiling.from_points(st.vertices(), check_crossings=False))
    assert st.sorted_moves() == fresh.sorted_moves()
    assert st.counts() == fresh.counts()


def test_monte_carlo(tiling):
    t = tiling("R", depth=4)
    final, trace = monte_carlo_flips(t, 2000, seed=11)
    assert not trace.stopped_early and len(trace.moves) == 2000
    assert all(ok and same for _, ok, same in trace.checks) and len(trace.checks) == 20
    assert final.counts() == t.counts()
    rms = np.array(trace.rms_perp)
    assert rms[-200:].mean() > rms[:200].mean()
    again, trace2 = monte_carlo_flips(t, 2000, seed=11)
    assert again == final and trace2.moves == trace.moves
