import numpy as np
import pytest

from conftest import ALL_L, ALL_R, build
from rphtiling.golden import TAU, GoldenInt
from rphtiling.gpsp import (MOTIF, RandomRule, Schedule, WheelDiagram, acute_corners, eliminate, gpsp_step,
                            gpsp_step_detailed, inflate, motif, point_inflation_only, rule_flags, rule_label,
                            run_sequence, seed_tiling)
from rphtiling.module import DIRECTIONS, MIRROR_MATRIX, canonical, embed_par, tau_scale
from rphtiling.tiling import StructuralFault, Tiling, validate
from rphtiling.window import hausdorff, perp_cloud

L, R_ = WheelDiagram.uniform("L"), WheelDiagram.uniform("R")
PENTAGON = np.cumsum(np.vstack([np.zeros((1, 4), dtype=np.int64), DIRECTIONS[[0, 2, 4, 6]]]), axis=0)


def rows(a):
    return {tuple(int(x) for x in r) for r in a}


# wheels and schedules ------------------------------------------------------

def test_wheel_strings():
    w = WheelDiagram.parse("lrllllllll")
    assert str(w) == "LRLLLLLLLL"
    assert WheelDiagram.from_int(0) == L and WheelDiagram.from_int(1023) == R_
    assert str(WheelDiagram.from_int(2)) == "LRLLLLLLLL"
    for bad in ("LLL", "LLLLLLLLLX", "L" * 11):
        with pytest.raises(ValueError):
            WheelDiagram.parse(bad)


def test_rule_labels():
    assert L.rule(0) == "l" and R_.rule(3) == "r"
    w = WheelDiagram.parse("LLLLLRRRRR")
    assert w.rule(0) == "m" and w.rule(5) == "m"
    assert WheelDiagram.parse("RRRRRLLLLL").rule(2) == "m'"
    for r in ("l", "r", "m", "m'"):
        assert rule_label(*rule_flags(r)) == r


def test_schedule_parse():
    s = Schedule.parse("LLLLLLLLLL, RANDOM(1,1,0,0) RRRRRRRRRR RANDOM")
    assert len(s) == 4
    assert isinstance(s[1], RandomRule) and s[1].weights == (1, 1, 0, 0) and s[1].stream == 0
    assert s[3].stream == 1
    assert s[4] == s[0]  # cycles
    assert str(s) == "LLLLLLLLLL RANDOM(1,1,0,0) RRRRRRRRRR RANDOM(1,1,1,1)"
    assert str(Schedule.parse(str(s))) == str(s)
    with pytest.raises(ValueError):
        Schedule.parse("")
    with pytest.raises(ValueError):
        RandomRule((1, -1, 0, 0))


def test_random_draw_is_keyed():
    r = RandomRule()
    a = r.draw(1000, 42, 3)
    assert np.array_equal(a, r.draw(1000, 42, 3))
    assert np.array_equal(a[:10], r.draw(10, 42, 3))  # prefix independent of the batch size
    assert not np.array_equal(a, r.draw(1000, 43, 3))
    assert not np.array_equal(a, r.draw(1000, 42, 4))
    assert not np.array_equal(a, RandomRule(stream=1).draw(1000, 42, 3))
    assert set(np.unique(a)) == {0, 1, 2, 3}


# motif and inflation -------------------------------------------------------

def test_motif():
    m = rows(motif())
    assert len(m) == 11
    assert (0, 0, 0, 0) in m and (1, 1, 0, 0) in m
    shell = MOTIF[1:]
    for i in range(10):
        assert embed_par(shell[i]).has_norm2(GoldenInt(1, 1))  # |p| = tau
        step = tuple(int(x) for x in shell[(i + 1) % 10] - shell[i])
        assert step in rows(DIRECTIONS)


def test_inflate_examples():
    assert rows(inflate([(0, 0, 0, 0)])) == rows(MOTIF)
    assert tau_scale(tau_scale((1, 0, 0, 0))) == (1, 0, -1, -1)
    assert (1, 0, -1, -1) in rows(inflate([(1, 0, 0, 0)]))
    edge = [(0, 0, 0, 0), (1, 0, 0, 0)]
    assert len(inflate(edge)) < 22
    assert len(inflate(edge)) == len(rows(inflate(edge)))


def test_inflate_overflow():
    with pytest.raises(OverflowError):
        inflate([(2**61, 0, 0, 0)])


def test_point_inflation_only():
    assert rows(point_inflation_only([(0, 0, 0, 0)], 1)) == rows(MOTIF)
    assert len(point_inflation_only([(0, 0, 0, 0)], 0)) == 1


# elimination ---------------------------------------------------------------

def test_single_rhombus_loses_two_points():
    t = seed_tiling("R")
    cand = inflate(t.vertices)
    el = eliminate(cand, t, L)
    assert len(el.removed) == 2 and el.designated == 2
    assert len(el.kept) == len(cand) - 2


def test_no_rhombi_no_elimination():
    t = Tiling.from_points(PENTAGON)
    cand = inflate(t.vertices)
    assert np.array_equal(eliminate(cand, t, L).kept, cand)


def test_both_choices_on_the_seed_validate():
    t = seed_tiling("R")
    a, b = gpsp_step(t, L), gpsp_step(t, R_)
    assert validate(a).ok and validate(b).ok
    assert a != b
    removed_l = rows(eliminate(inflate(t.vertices), t, L).removed)
    removed_r = rows(eliminate(inflate(t.vertices), t, R_).removed)
    assert removed_l.isdisjoint(removed_r)


def test_missing_designated_candidate_aborts():
    t = seed_tiling("R")
    cand = inflate(t.vertices)
    target = rows(eliminate(cand, t, L).removed)
    keep = np.array([r for r in rows(cand) if r not in target])
    with pytest.raises(StructuralFault):
        eliminate(canonical(keep), t, L)


def test_designations_count(tiling):
    t = tiling("R", depth=3)
    _, rec, el = gpsp_step_detailed(t, L)
    n_r = t.counts()["R"]
    assert el.designated == 2 * n_r
    assert len(el.removed) <= el.designated
    assert len(acute_corners(t).apex) == 2 * n_r


# steps and sequences -------------------------------------------------------

def test_frozen_vertex_counts(tiling):
    # regression values from the first validated runs
    assert [len(tiling("R", depth=d).vertices) for d in range(1, 6)] == [10, 44, 254, 1630, 10890]


def test_growth_factor(tiling):
    n = np.array([len(tiling("R", depth=d).vertices) for d in range(3, 7)], dtype=float)
    slope = np.polyfit(np.arange(3, 7), np.log(n), 1)[0]
    assert np.exp(slope) == pytest.approx(TAU**4, rel=0.06)
    assert n[-1] / n[-2] == pytest.approx(TAU**4, rel=0.03)


def test_every_step_validates(tiling):
    for d in range(1, 5):
        t = tiling("R", depth=d)
        rep = validate(t)
        assert rep.ok, (d, rep.faults)


def test_mirror_equivariance(tiling):
    t = tiling("R", depth=2)
    m = t.transformed(MIRROR_MATRIX)
    assert gpsp_step(m, R_) == gpsp_step(t, L).transformed(MIRROR_MATRIX)
    assert gpsp_step(m, L) == gpsp_step(t, R_).transformed(MIRROR_MATRIX)


def test_superset(tiling):
    for d in range(1, 5):
        sup = rows(point_inflation_only(seed_tiling("R").vertices, d))
        assert rows(tiling("R", depth=d).vertices) <= sup


def test_superset_cloud_strictly_contains(tiling):
    t = tiling("R", depth=4)
    sup = point_inflation_only(seed_tiling("R").vertices, 4)
    # compare exact indices: the perpendicular map is injective on the module
    a, b = rows(perp_cloud(t).indices), rows(perp_cloud(sup).indices)
    assert a < b


def test_schedules_differ(tiling):
    a = perp_cloud(tiling("R", ALL_L, 4)).normalized()
    b = perp_cloud(tiling("R", ALL_L + " " + ALL_R, 4)).normalized()
    assert hausdorff(a.points, b.points) > 0.05


def test_random_schedule_deterministic_and_valid():
    s = Schedule.parse("RANDOM")
    a, prov = run_sequence(seed_tiling("R"), s, 3, master_seed=2024)
    b, _ = run_sequence(seed_tiling("R"), s, 3, master_seed=2024)
    c, _ = run_sequence(seed_tiling("R"), s, 3, master_seed=2025)
    assert a == b
    assert a != c
    assert validate(a).ok and validate(c).ok
    assert prov.steps[1].stream == [2024, 1, 0]
    assert prov.to_dict()["schedule"] == "RANDOM(1,1,1,1)"


def test_history(tiling):
    _, prov, hist = run_sequence(seed_tiling("R"), Schedule.parse(ALL_L), 3, keep_history=True)
    assert len(hist) == 4 and hist[-1] == build("R", ALL_L, 3)
    assert [s.vertices for s in prov.steps] == [10, 44, 254]
