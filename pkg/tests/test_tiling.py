import numpy as np
import pytest

from rphtiling.gpsp import MOTIF, SEEDS, seed_tiling
from rphtiling.module import DIRECTIONS, par_float
from rphtiling.tiling import (AREA, KINDS, StructuralFault, Tiling, build_edges, extract_faces, face_area_exact,
                              face_areas, validate)


def walk(dirs):
    """Closed unit-step walk along the given direction indices, as Index4 rows."""
    return np.cumsum(np.vstack([np.zeros((1, 4), dtype=np.int64), DIRECTIONS[list(dirs[:-1])]]), axis=0)


PENTAGON = walk([0, 2, 4, 6, 8])
HEXAGON = walk([0, 2, 3, 5, 7, 8])


def test_single_edge():
    es = build_edges([(0, 0, 0, 0), (1, 0, 0, 0)])
    assert len(es.edges) == 1


def test_motif_shell_is_a_ring():
    es = build_edges(MOTIF)
    assert len(es.edges) == 10
    centre = int(np.nonzero((es.vertices == 0).all(axis=1))[0][0])
    assert es.degree[centre] == 0
    assert (np.delete(es.degree, centre) == 2).all()


def test_crossing_edges_are_a_fault():
    # e4 and e4 + e1 span a unit edge through the seed rhombus
    pts = np.array(SEEDS["R"] + [(-1, -1, -1, -1), (-1, 0, -1, -1)])
    with pytest.raises(StructuralFault, match="crossing"):
        build_edges(pts)
    assert len(build_edges(pts, check_crossings=False).edges) > 4


def test_seed_rhombus_is_one_r_face():
    t = seed_tiling("R")
    assert [f.kind for f in t.face_list()] == ["R"]


def test_pentagon():
    assert par_float(PENTAGON[-1:])[0] == pytest.approx([np.cos(np.radians(108)), np.sin(np.radians(108))])
    ft = extract_faces(build_edges(PENTAGON))
    assert [KINDS[k] for k in ft.kind] == ["P"]


def test_barrel_hexagon():
    xy = par_float(HEXAGON)
    expected = [(0, 0), (1, 0), (1.309, 0.951), (1, 1.902), (0, 1.902), (-0.309, 0.951)]
    assert xy == pytest.approx(np.array(expected), abs=1e-3)
    t = Tiling.from_points(HEXAGON)
    assert [f.kind for f in t.face_list()] == ["H"]
    assert face_areas(t.vertices, t.faces)[0] == pytest.approx(2.489898, abs=1e-6)


def test_exact_areas():
    for pts in (SEEDS["R"], PENTAGON, HEXAGON):
        t = Tiling.from_points(pts)
        name = KINDS[t.faces.kind[0]]
        area = face_area_exact(t.vertices, t.faces, 0)
        assert float(area) * np.sin(np.radians(72)) / 8 == pytest.approx(AREA[name])
    assert AREA["R"] == pytest.approx(0.587785, abs=1e-6)
    assert AREA["P"] == pytest.approx(1.720477, abs=1e-6)


def test_depth3_validates(tiling):
    rep = validate(tiling("R", depth=3), exact_areas=True)
    assert rep.ok, rep.faults


def test_deleting_an_interior_vertex_fails(tiling):
    t = tiling("R", depth=3)
    pos = t.positions()
    centre = pos.mean(axis=0)
    i = int(np.argmin(np.hypot(*(pos - centre).T)))
    broken = Tiling.from_points(np.delete(t.vertices, i, axis=0), check_crossings=False)
    rep = validate(broken)
    assert not rep.ok
    assert any("non-prototile" in f for f in rep.faults)
    assert rep.location is not None


def test_empty_tiling_passes():
    assert validate(Tiling.empty()).ok


def shoelace(xy):
    x, y = xy.T
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def test_faces_cover_the_patch(tiling):
    # bounded faces tile the region inside the outer walk exactly
    t = tiling("R", depth=4)
    areas = face_areas(t.vertices, t.faces)
    pos = t.positions()
    enclosed = sum(shoelace(pos[np.asarray(loop)]) for loop in t.faces.outer)
    assert areas.sum() == pytest.approx(enclosed, rel=1e-9)
    proto = t.faces.kind < 3
    assert areas[proto].sum() / enclosed > 0.85


def test_transformed_is_a_tiling(tiling):
    from rphtiling.module import group_matrix
    t = tiling("R", depth=2)
    for m, f in [(1, False), (3, True)]:
        u = t.transformed(group_matrix(m, f))
        assert validate(u).ok
        assert u.counts() == t.counts()
