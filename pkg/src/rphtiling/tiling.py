"""Unit-edge graphs, face extraction and validation for RPH tilings.

Every edge of an RPH tiling is one of the ten unit steps, so a vertex's
neighbourhood is a 10-slot table indexed by direction (slot ``k`` points at
36k degrees).  Angles between edges are then integer multiples of 36 degrees and
the counterclockwise face walk needs no floating point at all.  Crossing
tests use exact arithmetic in Z[tau].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from . import golden
from .module import DIRECTIONS, IndexLookup, canonical, exact_coords, par_float

KINDS = ("R", "P", "H", "unknown")
R, P, H, UNKNOWN = range(4)

# prototile areas (unit edges)
AREA = {
    "R": float(np.sin(np.pi / 5)),
    "P": float(5.0 / (4.0 * np.tan(np.pi / 5))),
    "H": float(2.0 * np.sin(2 * np.pi / 5) + np.sin(np.pi / 5)),
}


class StructuralFault(RuntimeError):
    """A point set or tiling violates the RPH construction rules."""

    def __init__(self, message: str, location=None):
        super().__init__(message if location is None else f"{message} at {tuple(np.round(location, 4))}")
        self.location = location


# ----------------------------------------------------------------------------
# edges


@dataclass
class EdgeSet:
    """Unit edges of a canonical point set plus the direction-slot table."""

    vertices: np.ndarray
    neighbours: np.ndarray  # (N, 10), -1 where no neighbour
    edges: np.ndarray  # (E, 2), each undirected edge once, directions 0..4 from the first vertex

    @property
    def degree(self) -> np.ndarray:
        return (self.neighbours >= 0).sum(axis=1)


def neighbour_table(vertices: np.ndarray, lookup: IndexLookup | None = None) -> np.ndarray:
    lookup = lookup or IndexLookup(vertices)
    n = len(vertices)
    nbr = np.full((n, 10), -1, dtype=np.int64)
    if n == 0:
        return nbr
    for k in range(10):
        nbr[:, k] = lookup.find(vertices + DIRECTIONS[k])
    return nbr


def build_edges(points, check_crossings: bool = True) -> EdgeSet:
    """Connect every pair of points one unit step apart.

    Raises :class:`StructuralFault` if two edges cross, since that means the
    point set is not unit connective.
    """
    vertices = canonical(np.asarray(points, dtype=np.int64).reshape(-1, 4))
    nbr = neighbour_table(vertices)
    rows, cols = np.nonzero(nbr[:, :5] >= 0)
    edges = np.stack([rows, nbr[rows, cols]], axis=1) if len(rows) else np.zeros((0, 2), dtype=np.int64)
    es = EdgeSet(vertices, nbr, edges)
    if check_crossings:
        bad = crossing_pairs(es)
        if len(bad):
            a = es.edges[bad[0, 0]]
            raise StructuralFault("crossing unit edges", par_float(vertices[a]).mean(axis=0))
    return es


def _orient(c, i, j, k):
    """Exact sign of the orientation of points i, j, k (rows of exact coords)."""
    dx1a, dx1b = c[j, 0] - c[i, 0], c[j, 1] - c[i, 1]
    dy1a, dy1b = c[j, 2] - c[i, 2], c[j, 3] - c[i, 3]
    dx2a, dx2b = c[k, 0] - c[i, 0], c[k, 1] - c[i, 1]
    dy2a, dy2b = c[k, 2] - c[i, 2], c[k, 3] - c[i, 3]
    pa, pb = golden.mul_arrays(dx1a, dx1b, dy2a, dy2b)
    qa, qb = golden.mul_arrays(dy1a, dy1b, dx2a, dx2b)
    return golden.sign_array(pa - qa, pb - qb).astype(np.int64)


def crossing_pairs(es: EdgeSet) -> np.ndarray:
    """Pairs of edge rows whose closed segments meet away from a shared endpoint."""
    E = es.edges
    if len(E) < 2:
        return np.zeros((0, 2), dtype=np.int64)
    xy = par_float(es.vertices)
    mid = (xy[E[:, 0]] + xy[E[:, 1]]) / 2.0
    pairs = cKDTree(mid).query_pairs(1.0 + 1e-9, output_type="ndarray")
    if len(pairs) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    a, b = E[pairs[:, 0]], E[pairs[:, 1]]
    distinct = (a[:, 0] != b[:, 0]) & (a[:, 0] != b[:, 1]) & (a[:, 1] != b[:, 0]) & (a[:, 1] != b[:, 1])
    pairs, a, b = pairs[distinct], a[distinct], b[distinct]
    if len(pairs) == 0:
        return pairs
    c = exact_coords(es.vertices)
    o1 = _orient(c, a[:, 0], a[:, 1], b[:, 0])
    o2 = _orient(c, a[:, 0], a[:, 1], b[:, 1])
    o3 = _orient(c, b[:, 0], b[:, 1], a[:, 0])
    o4 = _orient(c, b[:, 0], b[:, 1], a[:, 1])
    meet = (o1 * o2 <= 0) & (o3 * o4 <= 0)
    collinear = (o1 == 0) & (o2 == 0)
    if collinear.any():
        # unit edges on a common line overlap iff their midpoints are closer than 1
        d = np.linalg.norm(mid[pairs[:, 0]] - mid[pairs[:, 1]], axis=1)
        meet = np.where(collinear, d < 1.0 - 1e-9, meet)
    return pairs[meet]


# ----------------------------------------------------------------------------
# faces


@dataclass(frozen=True)
class Face:
    kind: str
    cycle: tuple  # vertex rows, counterclockwise
    orientation: int
    boundary: bool = False


@dataclass
class FaceTable:
    """Bounded faces in compressed form: ``indices[ptr[f]:ptr[f+1]]`` is face ``f``."""

    kind: np.ndarray
    ptr: np.ndarray
    indices: np.ndarray
    orientation: np.ndarray
    boundary: np.ndarray
    outer: list = field(default_factory=list)  # counter-clockwise-traversed outer cycles (as clockwise loops)

    def __len__(self) -> int:
        return len(self.kind)

    def cycle(self, f: int) -> np.ndarray:
        return self.indices[self.ptr[f]:self.ptr[f + 1]]

    def sizes(self) -> np.ndarray:
        return np.diff(self.ptr)

    def face(self, f: int) -> Face:
        return Face(KINDS[self.kind[f]], tuple(int(i) for i in self.cycle(f)),
                    int(self.orientation[f]), bool(self.boundary[f]))

    def counts(self, mask=None) -> dict:
        k = self.kind if mask is None else self.kind[mask]
        return {name: int((k == i).sum()) for i, name in enumerate(KINDS)}

    @classmethod
    def empty(cls) -> FaceTable:
        z = np.zeros(0, dtype=np.int64)
        return cls(z.astype(np.int8), np.zeros(1, dtype=np.int64), z, z.astype(np.int8), z.astype(bool))


def _half_edges(nbr: np.ndarray):
    tail, k = np.nonzero(nbr >= 0)
    head = nbr[tail, k]
    hid = tail * 10 + k
    # next half-edge around the face on the left: first slot clockwise of the reversed edge
    back = (k + 5) % 10
    nxt_dir = np.full(len(hid), -1, dtype=np.int64)
    turn = np.zeros(len(hid), dtype=np.int64)
    for t in range(1, 10):
        d = (back - t) % 10
        take = (nxt_dir < 0) & (nbr[head, d] >= 0)
        nxt_dir[take] = d[take]
        turn[take] = t
    # a dangling edge walks straight back
    dangling = nxt_dir < 0
    nxt_dir[dangling] = back[dangling]
    turn[dangling] = 10
    return tail, k, head, hid, head * 10 + nxt_dir, turn


def extract_faces(es: EdgeSet) -> FaceTable:
    """Walk every face of a planar unit-edge graph and classify it.

    Bounded faces are returned; the unbounded walk of each component is kept in
    ``outer``.  Interior angles are ``36° * turn``; a bounded cycle of length n
    has turns summing to ``5 (n - 2)``.
    """
    nbr = es.neighbours
    if len(es.edges) == 0:
        return FaceTable.empty()
    tail, k, head, hid, nxt_hid, turn = _half_edges(nbr)
    # compact half-edge numbering
    order = np.argsort(hid)
    hid, tail, k, head, turn, nxt_hid = hid[order], tail[order], k[order], head[order], turn[order], nxt_hid[order]
    nxt = np.searchsorted(hid, nxt_hid)
    m = len(hid)
    prev = np.empty(m, dtype=np.int64)
    prev[nxt] = np.arange(m)
    g = coo_matrix((np.ones(m, dtype=np.int8), (np.arange(m), nxt)), shape=(m, m))
    ncomp, label = connected_components(g, directed=True, connection="weak")

    size = np.bincount(label, minlength=ncomp)
    # turn stored on half-edge h is the angle at its head vertex
    turn_sum = np.bincount(label, weights=turn, minlength=ncomp).astype(np.int64)
    bounded = turn_sum == 5 * (size - 2)
    n1 = np.bincount(label, weights=(turn == 1), minlength=ncomp)
    n3 = np.bincount(label, weights=(turn == 3), minlength=ncomp)
    n4 = np.bincount(label, weights=(turn == 4), minlength=ncomp)
    kind = np.full(ncomp, UNKNOWN, dtype=np.int8)
    kind[bounded & (size == 4) & (n1 == 2) & (n4 == 2)] = R
    kind[bounded & (size == 5) & (n3 == 5)] = P
    kind[bounded & (size == 6) & (n3 == 4) & (n4 == 2)] = H

    # canonical start half-edge: its tail carries the kind's distinguished angle
    tail_turn = turn[prev]
    eligible = np.ones(m, dtype=bool)
    hk = kind[label]
    eligible[hk == R] = tail_turn[hk == R] == 1
    eligible[hk == H] = tail_turn[hk == H] == 4
    key = np.where(eligible, 0, 1) * (10 * (len(nbr) + 1)) + k * (len(nbr) + 1) + tail
    by = np.lexsort((key, label))
    first = np.ones(m, dtype=bool)
    first[1:] = label[by][1:] != label[by][:-1]
    start = np.empty(ncomp, dtype=np.int64)
    start[label[by][first]] = by[first]

    comps = np.nonzero(bounded)[0]
    comps = comps[np.argsort(tail[start[comps]] * 10 + k[start[comps]], kind="stable")]
    sizes = size[comps]
    ptr = np.zeros(len(comps) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum(sizes)
    indices = np.empty(ptr[-1], dtype=np.int64)
    cur = start[comps].copy()
    small = sizes <= 6
    for step in range(6):
        live = small & (step < sizes)
        indices[ptr[:-1][live] + step] = tail[cur[live]]
        cur[live] = nxt[cur[live]]
    for f in np.nonzero(~small)[0]:
        h = start[comps[f]]
        for step in range(sizes[f]):
            indices[ptr[f] + step] = tail[h]
            h = nxt[h]

    outer = []
    for c in np.nonzero(~bounded)[0]:
        h0 = h = start[c]
        loop = []
        while True:
            loop.append(int(tail[h]))
            h = nxt[h]
            if h == h0:
                break
        outer.append(np.array(loop, dtype=np.int64))

    fkind = kind[comps]
    boundary = np.zeros(len(comps), dtype=bool)
    if outer and (fkind == UNKNOWN).any():
        on_rim = np.zeros(len(nbr), dtype=bool)
        for loop in outer:
            on_rim[loop] = True
        for f in np.nonzero(fkind == UNKNOWN)[0]:
            boundary[f] = on_rim[indices[ptr[f]:ptr[f + 1]]].any()
    return FaceTable(fkind, ptr, indices, k[start[comps]].astype(np.int8), boundary, outer)


def face_area_exact(vertices: np.ndarray, faces: FaceTable, f: int) -> golden.GoldenInt:
    """``8 * area / sin72`` of face ``f`` as a golden integer (shoelace)."""
    c = exact_coords(vertices[faces.cycle(f)])
    acc = golden.ZERO
    n = len(c)
    for i in range(n):
        j = (i + 1) % n
        x1, y1 = golden.GoldenInt(*map(int, c[i, :2])), golden.GoldenInt(*map(int, c[i, 2:]))
        x2, y2 = golden.GoldenInt(*map(int, c[j, :2])), golden.GoldenInt(*map(int, c[j, 2:]))
        acc = acc + x1 * y2 - x2 * y1
    # 2A = sum(x1 y2 - x2 y1) with x = X/2, y = s Y/2  =>  8A/s = sum(X1 Y2 - X2 Y1)
    return acc


def face_areas(vertices: np.ndarray, faces: FaceTable) -> np.ndarray:
    """Float shoelace areas of all bounded faces."""
    if len(faces) == 0:
        return np.zeros(0)
    xy = par_float(vertices)[faces.indices]
    nxt = np.arange(len(faces.indices)) + 1
    nxt[faces.ptr[1:] - 1] = faces.ptr[:-1]
    cross = xy[:, 0] * xy[nxt, 1] - xy[nxt, 0] * xy[:, 1]
    return 0.5 * np.add.reduceat(cross, faces.ptr[:-1]) if len(faces.indices) else np.zeros(0)


# exact 8A/s values of the prototiles
EXACT_AREA_X8_OVER_S = {
    "R": golden.GoldenInt(-8, 8),  # sin36 = s (tau - 1)
    "P": golden.GoldenInt(8, 4),
    "H": golden.GoldenInt(8, 8),
}


# ----------------------------------------------------------------------------
# tilings


class Tiling:
    """An edge-to-edge patch of R, P and H tiles on the decagonal module.

    Construct with :meth:`from_points`; the edge set and faces are derived
    from the vertex set, which is all a unit-connective patch needs.
    """

    def __init__(self, vertices: np.ndarray, edges: EdgeSet, faces: FaceTable):
        self.vertices = vertices
        self.edge_set = edges
        self.faces = faces

    @classmethod
    def from_points(cls, points, check_crossings: bool = True) -> Tiling:
        es = build_edges(points, check_crossings=check_crossings)
        return cls(es.vertices, es, extract_faces(es))

    @classmethod
    def empty(cls) -> Tiling:
        return cls.from_points(np.zeros((0, 4), dtype=np.int64))

    @property
    def edges(self) -> np.ndarray:
        return self.edge_set.edges

    @property
    def neighbours(self) -> np.ndarray:
        return self.edge_set.neighbours

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Tiling) and np.array_equal(self.vertices, other.vertices)

    def __repr__(self) -> str:
        c = self.counts()
        return f"Tiling({len(self.vertices)} vertices, R={c['R']}, P={c['P']}, H={c['H']}, unknown={c['unknown']})"

    def counts(self) -> dict:
        return self.faces.counts()

    def face_list(self) -> list[Face]:
        return [self.faces.face(f) for f in range(len(self.faces))]

    def vertex_set(self) -> set:
        return {tuple(int(v) for v in row) for row in self.vertices}

    def positions(self) -> np.ndarray:
        return par_float(self.vertices)

    def rhombi(self) -> np.ndarray:
        return np.nonzero(self.faces.kind == R)[0]

    def prototile_vertices(self) -> np.ndarray:
        """Rows of vertices that belong to at least one R, P or H face."""
        ft = self.faces
        sizes = ft.sizes()
        proto = np.repeat(ft.kind != UNKNOWN, sizes)
        keep = np.zeros(len(self.vertices), dtype=bool)
        keep[ft.indices[proto]] = True
        return np.nonzero(keep)[0]

    def transformed(self, matrix: np.ndarray) -> Tiling:
        return Tiling.from_points(self.vertices @ matrix, check_crossings=False)


# ----------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ok: bool
    faults: list = field(default_factory=list)
    location: tuple | None = None

    @property
    def first(self) -> str | None:
        return self.faults[0] if self.faults else None

    def __bool__(self) -> bool:
        return self.ok

    def raise_for_faults(self) -> None:
        if not self.ok:
            raise StructuralFault(self.first, self.location)


def validate(t: Tiling, exact_areas: bool = False) -> ValidationReport:
    """Check the tiling invariants and report the first counterexample.

    Checks: edges are exactly the unit pairs of the vertex set, no two edges
    meet away from an endpoint, the edge graph is connected, every vertex lies
    on a prototile face, and every bounded face off the patch rim is an R, P or
    H tile.
    """
    faults: list[str] = []
    loc = None
    v = t.vertices
    if len(v) == 0:
        return ValidationReport(True)
    if len(np.unique(v, axis=0)) != len(v):
        faults.append("duplicate vertices")
    es = build_edges(v, check_crossings=False)
    if not np.array_equal(es.vertices, v) or not np.array_equal(es.edges, t.edges):
        faults.append("edge set differs from the unit pairs of the vertex set")
    bad = crossing_pairs(es)
    if len(bad):
        loc = tuple(par_float(v[es.edges[bad[0, 0]]]).mean(axis=0))
        faults.append(f"{len(bad)} pairs of crossing edges")
    if len(v) > 1:
        if len(es.edges) == 0:
            faults.append("no edges between vertices")
        else:
            n = len(v)
            g = coo_matrix((np.ones(len(es.edges)), (es.edges[:, 0], es.edges[:, 1])), shape=(n, n))
            ncomp, _ = connected_components(g, directed=False)
            if ncomp != 1:
                faults.append(f"edge graph has {ncomp} components")
    ft = extract_faces(es)
    if not (np.array_equal(ft.kind, t.faces.kind) and np.array_equal(ft.indices, t.faces.indices)):
        faults.append("stored faces differ from the faces of the edge graph")
    interior_bad = np.nonzero((ft.kind == UNKNOWN) & ~ft.boundary)[0]
    if len(interior_bad):
        f = interior_bad[0]
        if loc is None:
            loc = tuple(par_float(v[ft.cycle(f)]).mean(axis=0))
        faults.append(f"interior non-prototile face with {len(ft.cycle(f))} vertices")
    if len(v) > 1 and len(ft):
        on_face = np.zeros(len(v), dtype=bool)
        on_face[ft.indices[np.repeat(ft.kind != UNKNOWN, ft.sizes())]] = True
        if not on_face.all():
            i = np.nonzero(~on_face)[0][0]
            if loc is None:
                loc = tuple(par_float(v[i:i + 1])[0])
            faults.append(f"{int((~on_face).sum())} vertices on no prototile face")
    if exact_areas:
        for f in range(len(ft)):
            name = KINDS[ft.kind[f]]
            if name in EXACT_AREA_X8_OVER_S and face_area_exact(v, ft, f) != EXACT_AREA_X8_OVER_S[name]:
                faults.append(f"face {f} has the angles of {name} but not its area")
                break
    return ValidationReport(not faults, faults, loc)
