"""Tile and vertex statistics of finite patches.

Counts are taken inside a clip region, the convex hull of the patch shrunk by
a factor about its centroid, so that the ragged rim does not bias densities.
Tile frequencies count a face when its vertex centroid is inside; densities
weight every face by the fraction of its area inside, which removes the
jitter of tiles cut by the clip line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from scipy.spatial import ConvexHull, Delaunay, cKDTree

from .golden import TAU
from .tiling import AREA, H, KINDS, P, R, Tiling

A_R = math.sin(math.pi / 5)  # area of the R tile, also written a
OMEGA4 = 5.0 * math.sqrt(5.0) / 4.0  # 4D volume of the primitive cell of the decagonal lattice
WINDOW_AREA = 2.0 * math.sqrt(5.0) * A_R
VERTEX_DENSITY = 8.0 * A_R / 5.0
TILE_DENSITY = {"R": 4.0 * A_R / (5.0 * TAU**2), "P": 8.0 * A_R / (5.0 * TAU**2), "H": 4.0 * A_R / (5.0 * TAU**3)}
FREQUENCY = (1.0, 2.0, 1.0 / TAU)
DEFAULT_CLIP = 0.8
PROTO = (R, P, H)


@dataclass
class ClipRegion:
    hull: np.ndarray  # (K, 2) counter-clockwise polygon
    area: float

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        if len(self.hull) < 3:
            return np.zeros(len(points), dtype=bool)
        return Delaunay(self.hull).find_simplex(points) >= 0


def clip_region(t: Tiling, factor: float = DEFAULT_CLIP) -> ClipRegion:
    if not 0 < factor <= 1:
        raise ValueError("clip factor must lie in (0, 1]")
    pos = t.positions()
    if len(pos) < 3:
        return ClipRegion(np.zeros((0, 2)), 0.0)
    ch = ConvexHull(pos)
    ring = pos[ch.vertices]
    # area centroid of the hull polygon
    x, y = ring[:, 0], ring[:, 1]
    cross = x * np.roll(y, -1) - np.roll(x, -1) * y
    a = cross.sum() / 2.0
    centre = np.array([((x + np.roll(x, -1)) * cross).sum(), ((y + np.roll(y, -1)) * cross).sum()]) / (6.0 * a)
    return ClipRegion(centre + factor * (ring - centre), float(abs(a)) * factor**2)


def face_centroids(t: Tiling) -> np.ndarray:
    ft = t.faces
    if len(ft) == 0:
        return np.zeros((0, 2))
    pos = t.positions()
    sums = np.add.reduceat(pos[ft.indices], ft.ptr[:-1], axis=0)
    return sums / ft.sizes()[:, None]


def interior_faces(t: Tiling, clip: float = DEFAULT_CLIP) -> np.ndarray:
    """Prototile faces whose centroid lies in the clip region."""
    region = clip_region(t, clip)
    inside = region.contains(face_centroids(t))
    return np.nonzero(inside & np.isin(t.faces.kind, PROTO))[0]


@dataclass
class Frequencies:
    counts: dict
    ratios: dict  # per R tile
    degenerate: bool = False

    def __iter__(self):
        return iter((self.counts, self.ratios))


def tile_frequencies(t: Tiling, clip: float = DEFAULT_CLIP) -> Frequencies:
    """Interior tile counts and their ratios to the R count.

    With no interior R tile the ratios are NaN and the result is flagged
    degenerate.
    """
    faces = interior_faces(t, clip) if len(t.faces) > 1 else np.nonzero(np.isin(t.faces.kind, PROTO))[0]
    kinds = t.faces.kind[faces]
    counts = {KINDS[k]: int((kinds == k).sum()) for k in PROTO}
    n_r = counts["R"]
    ratios = {k: (v / n_r if n_r else math.nan) for k, v in counts.items()}
    return Frequencies(counts, ratios, degenerate=n_r == 0)


@dataclass
class DensityReport:
    n_R: float
    n_P: float
    n_H: float
    v: float
    patch_area: float
    a: float = A_R
    w: float = 0.0  # window area implied by v, v * Omega4
    Omega4: float = OMEGA4
    residuals: dict = field(default_factory=dict)  # relative, equation -> (lhs - rhs) / rhs
    deviations: dict = field(default_factory=dict)  # relative, density -> (measured - closed form) / closed form
    area_closure: float = 0.0

    def __post_init__(self):
        if min(self.n_R, self.n_P, self.n_H, self.v) < 0 or self.patch_area <= 0:
            raise ValueError("densities must be nonnegative and the patch area positive")

    def to_dict(self) -> dict:
        return {"n_R": self.n_R, "n_P": self.n_P, "n_H": self.n_H, "v": self.v,
                "patch_area": self.patch_area, "a": self.a, "w": self.w, "Omega4": self.Omega4,
                "residuals": dict(self.residuals), "deviations": dict(self.deviations),
                "area_closure": self.area_closure}


def equation_residuals(n_r: float, n_p: float, n_h: float) -> dict:
    """Relative residuals of the linear relations between tile and vertex densities.

    ``vertex`` counts vertices per tile (an R owns 1, a P 3/2, an H 2);
    ``plane`` and ``plane_tau`` are sums of the projections of the tiling
    onto the ten lattice planes.
    """
    a = A_R
    lhs_rhs = {
        "vertex": (n_r + 1.5 * n_p + 2.0 * n_h, 8.0 * a / 5.0),
        "plane": (n_r + 0.5 * n_p + n_h, 4.0 * a / 5.0),
        "plane_tau": (1.5 * n_p + 2.0 * n_h, 4.0 * TAU * a / 5.0),
    }
    return {k: (lhs - rhs) / rhs for k, (lhs, rhs) in lhs_rhs.items()}


def face_polygons(t: Tiling, faces: np.ndarray) -> np.ndarray:
    ft = t.faces
    if len(faces) == 0:
        return np.zeros(0, dtype=object)
    sizes = ft.sizes()[faces]
    rows = ft.indices[np.concatenate([np.arange(ft.ptr[f], ft.ptr[f + 1]) for f in faces])]
    rings = shapely.linearrings(t.positions()[rows], indices=np.repeat(np.arange(len(faces)), sizes))
    return shapely.polygons(rings)


def inside_fractions(t: Tiling, region: ClipRegion, faces: np.ndarray) -> np.ndarray:
    polys = face_polygons(t, faces)
    clip = shapely.Polygon(region.hull)
    return shapely.area(shapely.intersection(polys, clip)) / shapely.area(polys)


def density_report(t: Tiling, clip: float = DEFAULT_CLIP) -> DensityReport:
    region = clip_region(t, clip)
    if region.area <= 0:
        raise ValueError("patch too small to clip")
    faces = np.nonzero(np.isin(t.faces.kind, PROTO))[0]
    weight = inside_fractions(t, region, faces)
    kinds = t.faces.kind[faces]
    n = {KINDS[k]: float(weight[kinds == k].sum()) / region.area for k in PROTO}
    v = float(region.contains(t.positions()).sum()) / region.area
    dev = {k: (n[k] - TILE_DENSITY[k]) / TILE_DENSITY[k] for k in n}
    dev["v"] = (v - VERTEX_DENSITY) / VERTEX_DENSITY
    closure = sum(n[k] * AREA[k] for k in n)
    return DensityReport(n["R"], n["P"], n["H"], v, region.area, w=v * OMEGA4,
                         residuals=equation_residuals(n["R"], n["P"], n["H"]), deviations=dev,
                         area_closure=closure)


# ----------------------------------------------------------------------------
# substitution matrix


@dataclass
class SubstitutionMatrix:
    matrix: np.ndarray  # M[i, j]: mean number of type-i tiles inside an inflated type-j tile
    eigenvalue: float
    eigenvector: np.ndarray  # Perron vector scaled to R = 1
    parents: np.ndarray  # interior parent tiles used per type
    condition: float

    def to_dict(self) -> dict:
        return {"matrix": self.matrix.tolist(), "eigenvalue": self.eigenvalue,
                "eigenvector": self.eigenvector.tolist(), "parents": self.parents.tolist(),
                "condition": self.condition}


def _locate(points: np.ndarray, polys: np.ndarray, sizes: np.ndarray, centres: np.ndarray,
            k: int = 6) -> np.ndarray:
    """Index of the convex polygon containing each point (first hit), -1 if none."""
    k = min(k, len(centres))
    _, cand = cKDTree(centres).query(points, k=k)
    cand = cand.reshape(len(points), k)
    out = np.full(len(points), -1, dtype=np.int64)
    for col in range(k):
        todo = out < 0
        if not todo.any():
            break
        f = cand[todo, col]
        poly = polys[f]  # (M, 6, 2), padded by repeating the first vertex
        nxt = np.roll(poly, -1, axis=1)
        q = points[todo][:, None, :]
        cross = (nxt[..., 0] - poly[..., 0]) * (q[..., 1] - poly[..., 1]) - \
                (nxt[..., 1] - poly[..., 1]) * (q[..., 0] - poly[..., 0])
        valid = np.arange(6)[None, :] < sizes[f][:, None]
        inside = np.all((cross >= -1e-9) | ~valid, axis=1)
        idx = np.nonzero(todo)[0]
        out[idx[inside]] = f[inside]
    return out


def _padded_polygons(t: Tiling, scale: float) -> tuple[np.ndarray, np.ndarray]:
    ft = t.faces
    pos = t.positions() * scale
    sizes = ft.sizes()
    polys = np.empty((len(ft), 6, 2))
    for f in range(len(ft)):
        cyc = ft.cycle(f)
        if len(cyc) > 6:
            cyc = cyc[:6]  # unknown rim faces; never interior parents
        ring = pos[cyc]
        polys[f, :len(ring)] = ring
        polys[f, len(ring):] = ring[0]
    return polys, np.minimum(sizes, 6)


def substitution_matrix_estimate(patches, clip: float = DEFAULT_CLIP) -> SubstitutionMatrix:
    """Average tile content of inflated parent tiles over consecutive patches.

    Each tile of patch ``n+1`` is assigned to the parent tile of patch ``n``
    whose tau**2-inflated copy contains its centroid.  Only parents inside
    the clip region count, so that all their children exist.
    """
    patches = list(patches)
    if len(patches) < 2:
        raise ValueError("need at least two consecutive patches")
    content = np.zeros((3, 3))
    parents = np.zeros(3)
    for parent, child in zip(patches[:-1], patches[1:]):
        inner = interior_faces(parent, clip)
        if len(inner) == 0:
            continue
        polys, sizes = _padded_polygons(parent, TAU**2)
        centres = face_centroids(parent) * TAU**2
        ck = child.faces.kind
        proto = np.nonzero(np.isin(ck, PROTO))[0]
        owner = _locate(face_centroids(child)[proto], polys, sizes, centres)
        pk = parent.faces.kind
        is_inner = np.zeros(len(pk), dtype=bool)
        is_inner[inner] = True
        ok = owner >= 0
        ok[ok] &= is_inner[owner[ok]]
        np.add.at(content, (ck[proto][ok], pk[owner[ok]]), 1.0)
        parents += np.bincount(pk[inner], minlength=3)[:3]
    if (parents == 0).any():
        raise ValueError("some tile type has no interior parent; patches too small")
    m = content / parents[None, :]
    vals, vecs = np.linalg.eig(m)
    i = int(np.argmax(vals.real))
    vec = np.abs(vecs[:, i].real)
    return SubstitutionMatrix(m, float(vals[i].real), vec / vec[0], parents.astype(np.int64),
                              float(np.linalg.cond(m)))
