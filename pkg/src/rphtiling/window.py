"""Perpendicular-space analytics: clouds, window area, boundary, box counting.

The window of a tiling is approximated by the cloud of perpendicular images
of its vertices.  Area and boundary are read off a raster: a cell is occupied
when it holds at least half the median count of the nonempty cells, holes are
filled, and the largest connected piece is kept.  Box counting runs on the
boundary cells of that raster.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .golden import TAU
from .module import perp_float
from .tiling import Tiling

log = logging.getLogger(__name__)

SIGMA_BAR = 1.0 / TAU**2  # perpendicular contraction of one step
DEFAULT_GRID = 0.02
BOUNDARY_GRID = 0.005
GRID_RANGE = (0.005, 0.1)
ANALYTIC_DIMENSION = math.log(3.0) / math.log(TAU**2)


@dataclass
class PerpCloud:
    """Perpendicular images of a vertex set; ``indices`` keeps the exact rows."""

    points: np.ndarray
    indices: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def radius(self) -> float:
        return float(np.hypot(*self.points.T).max()) if len(self) else 0.0

    @property
    def diameter(self) -> float:
        if len(self) < 2:
            return 0.0
        return float(np.ptp(self.points, axis=0).max())

    def normalized(self) -> PerpCloud:
        r = self.radius
        return PerpCloud(self.points / r if r else self.points, self.indices, self.label)

    def transformed(self, matrix: np.ndarray) -> PerpCloud:
        return PerpCloud(self.points @ np.asarray(matrix, dtype=float).T, None, self.label)


def perp_cloud(t: Tiling | np.ndarray, label: str = "") -> PerpCloud:
    idx = t.vertices if isinstance(t, Tiling) else np.asarray(t, dtype=np.int64).reshape(-1, 4)
    return PerpCloud(perp_float(idx), idx, label)


# ----------------------------------------------------------------------------
# rasters


@dataclass
class Raster:
    """Boolean cell mask; cell ``(i, j)`` covers ``origin + step * [i, i+1) x [j, j+1)``."""

    mask: np.ndarray
    origin: np.ndarray
    step: float

    def cell_centres(self, cells: np.ndarray) -> np.ndarray:
        return self.origin + (np.asarray(cells) + 0.5) * self.step


def _check_step(grid_step: float) -> None:
    if not (grid_step > 0 and math.isfinite(grid_step)):
        raise ValueError(f"grid step must be positive, got {grid_step!r}")


def occupancy(c: PerpCloud, grid_step: float = DEFAULT_GRID, threshold: float = 0.5) -> Raster:
    """Filled occupancy raster of the cloud (see module docstring)."""
    _check_step(grid_step)
    if len(c) == 0:
        raise ValueError("empty cloud")
    cells = np.floor(c.points / grid_step).astype(np.int64)
    lo = cells.min(axis=0) - 2
    cells -= lo
    counts = np.zeros(tuple(cells.max(axis=0) + 3), dtype=np.int64)
    np.add.at(counts, (cells[:, 0], cells[:, 1]), 1)
    med = np.median(counts[counts > 0])
    occ = ndimage.binary_fill_holes(counts >= threshold * med)
    lab, n = ndimage.label(occ)
    if n > 1:
        sizes = np.bincount(lab.ravel())
        sizes[0] = 0
        occ = lab == sizes.argmax()
    return Raster(occ, lo * grid_step, grid_step)


def window_area(c: PerpCloud, grid_step: float = DEFAULT_GRID) -> float:
    """Area of the filled occupancy raster.

    The cloud must be dense enough that a typical cell holds several points;
    otherwise the mask breaks into specks and the estimate collapses.
    An empty cloud has area 0.
    """
    if not GRID_RANGE[0] <= grid_step <= GRID_RANGE[1]:
        raise ValueError(f"grid step must lie in {GRID_RANGE[0]}..{GRID_RANGE[1]}, got {grid_step!r}")
    if len(c) == 0:
        return 0.0
    r = occupancy(c, grid_step)
    return float(r.mask.sum()) * grid_step * grid_step


@dataclass
class BoundaryCells:
    cells: np.ndarray  # (M, 2) integer cell coordinates
    step: float
    origin: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __len__(self) -> int:
        return len(self.cells)

    def centres(self) -> np.ndarray:
        return self.origin + (self.cells + 0.5) * self.step


def boundary_cells(c: PerpCloud, grid_step: float = BOUNDARY_GRID) -> BoundaryCells:
    """Occupied cells with at least one unoccupied 4-neighbour."""
    r = occupancy(c, grid_step)
    edge = r.mask & ~ndimage.binary_erosion(r.mask)
    return BoundaryCells(np.argwhere(edge), grid_step, r.origin)


def rasterize_polyline(points: np.ndarray, grid_step: float) -> BoundaryCells:
    """Cells crossed by a polyline, sampled at a quarter cell along each segment."""
    _check_step(grid_step)
    p = np.asarray(points, dtype=float)
    seg = np.diff(p, axis=0)
    n = np.maximum(1, np.ceil(np.hypot(*seg.T) / (0.25 * grid_step)).astype(int))
    samples = [p[:-1][i] + seg[i] * (np.arange(n[i])[:, None] / n[i]) for i in range(len(seg))]
    samples.append(p[-1:])
    cells = np.unique(np.floor(np.concatenate(samples) / grid_step).astype(np.int64), axis=0)
    return BoundaryCells(cells, grid_step)


# ----------------------------------------------------------------------------
# box counting


@dataclass
class FractalFit:
    scales: list
    counts: list
    slope: float
    r2: float

    @property
    def degenerate(self) -> bool:
        return not (self.r2 >= 0.9)

    def to_dict(self) -> dict:
        return {"scales": list(self.scales), "counts": list(self.counts), "slope": self.slope,
                "r2": self.r2, "degenerate": self.degenerate}


def octave_scales(smallest: float, octaves: float = 3.0, per_octave: int = 2) -> list:
    k = np.arange(int(round(octaves * per_octave)) + 1)
    return [float(smallest * 2.0 ** (i / per_octave)) for i in k]


# Boxes start well above the raster cell (8 cells at the boundary grid); below
# that the cell staircase looks smooth and drags the slope towards 1.
DEFAULT_SCALES = octave_scales(0.04)


def box_count(centres: np.ndarray, size: float, offsets: int = 4) -> float:
    """Mean number of occupied boxes over ``offsets`` diagonal grid shifts."""
    counts = []
    for o in range(offsets):
        shift = size * o / offsets
        keys = np.floor((centres + shift) / size).astype(np.int64)
        counts.append(len(np.unique(keys, axis=0)))
    return float(np.mean(counts))


def box_dimension(boundary: BoundaryCells, scales=None) -> FractalFit:
    """Least-squares slope of log N(s) against log(1/s).

    ``scales`` must span at least three octaves.  A fit with r² below 0.9 is
    flagged as degenerate and logged, not raised.
    """
    scales = list(DEFAULT_SCALES if scales is None else scales)
    if len(scales) < 3 or max(scales) / min(scales) < 8.0 - 1e-9:
        raise ValueError("box sizes must span at least three octaves")
    if min(scales) < boundary.step:
        raise ValueError("box sizes must not be smaller than the raster cell")
    centres = boundary.centres()
    counts = [box_count(centres, s) for s in scales]
    x = np.log(1.0 / np.asarray(scales))
    y = np.log(np.asarray(counts))
    slope = float(np.polyfit(x, y, 1)[0])
    r2 = float(np.corrcoef(x, y)[0, 1] ** 2) if np.ptp(y) > 0 else 0.0
    fit = FractalFit(scales, counts, slope, r2)
    if fit.degenerate:
        log.warning("degenerate box-count fit: r2=%.3f", r2)
    return fit


# ----------------------------------------------------------------------------
# Koch sector

# Turn angles (degrees, relative to the parent chord) of the three replacement
# segments, and whether each piece is drawn end-to-start; produced by
# tools/calibrate_koch.py against the all-L window.
KOCH_TEMPLATE = (36.0, -36.0, 0.0)
KOCH_REVERSED = (True, False, False)
# one tip-to-tip arc of the all-L window: tips sit at radius 1 on the 36° rays
KOCH_START = (1.0, 0.0)
KOCH_END = (math.cos(math.pi / 5), math.sin(math.pi / 5))


@dataclass
class KochSector:
    points: np.ndarray  # (3**depth + 1, 2) polyline vertices
    depth: int
    template: tuple
    reversed: tuple

    def segment_length(self) -> float:
        return float(np.hypot(*np.diff(self.points[:2], axis=0)[0]))

    def closed(self) -> np.ndarray:
        """The full boundary: ten copies of the arc turned by multiples of 36°."""
        a = np.pi / 5 * np.arange(10)
        rot = np.stack([np.stack([np.cos(a), -np.sin(a)], 1), np.stack([np.sin(a), np.cos(a)], 1)], 1)
        ring = np.einsum("kij,nj->kni", rot, self.points[:-1]).reshape(-1, 2)
        return np.vstack([ring, ring[:1]])

    def fractal_fit(self, grid_step: float = 0.001) -> FractalFit:
        """Box count of the closed curve from four segment lengths up, three octaves."""
        cells = rasterize_polyline(self.closed(), grid_step)
        return box_dimension(cells, octave_scales(max(4.0 * self.segment_length(), grid_step)))


def template_closes(template, tol: float = 1e-9) -> bool:
    """True when three segments of length 1/tau**2 at these turns span the chord."""
    z = sum(np.exp(1j * np.radians(a)) for a in template)
    return abs(z - TAU**2) < tol


def koch_sector(depth: int, template=KOCH_TEMPLATE, reversed_pieces=KOCH_REVERSED,
                start=KOCH_START, end=KOCH_END) -> KochSector:
    """Replace every segment by three segments 1/tau**2 as long, ``depth`` times.

    A reversed piece is generated from its far end and read backwards, so its
    own sub-pieces come out in mirrored order with flipped reversal flags.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if len(template) != 3 or not template_closes(template):
        raise ValueError(f"template {template!r} does not close on the chord")
    turns = np.exp(1j * np.radians(np.asarray(template, dtype=float))) / TAU**2
    rev = np.asarray(reversed_pieces, dtype=bool)
    a = np.array([complex(*start)])
    b = np.array([complex(*end)])
    flip = np.array([False])
    for _ in range(depth):
        # generate along the drawing direction, then restore the traversal order
        s, e = np.where(flip, b, a), np.where(flip, a, b)
        pts = s[:, None] + (e - s)[:, None] * np.concatenate([[0], np.cumsum(turns)])[None, :]
        cs, ce = pts[:, :3], pts[:, 1:]
        cflip = np.broadcast_to(rev, cs.shape)
        # a flipped parent walks its pieces backwards and swaps their ends
        order = np.where(flip[:, None], [2, 1, 0], [0, 1, 2])
        rows = np.arange(len(s))[:, None]
        cs, ce, cflip = cs[rows, order], ce[rows, order], cflip[rows, order]
        ns = np.where(flip[:, None], ce, cs)
        ne = np.where(flip[:, None], cs, ce)
        nf = flip[:, None] ^ cflip
        a, b, flip = ns.ravel(), ne.ravel(), nf.ravel()
    z = np.append(a, b[-1])
    return KochSector(np.stack([z.real, z.imag], axis=1), depth, tuple(template), tuple(bool(x) for x in rev))


def template_family(step_deg: float = 0.5) -> list:
    """Closing templates: first turn on a grid, the other two solved for."""
    out = []
    for a1 in np.arange(-180.0, 180.0, step_deg):
        z = TAU**2 - np.exp(1j * np.radians(a1))
        m = abs(z)
        if m > 2.0:
            continue
        half = math.degrees(math.acos(m / 2.0))
        mid = math.degrees(np.angle(z))
        for sgn in (1, -1):
            out.append((float(a1), mid + sgn * half, mid - sgn * half))
    return out


def boundary_sector(c: PerpCloud, lo_deg: float = 0.0, hi_deg: float = 36.0,
                    grid_step: float = DEFAULT_GRID) -> np.ndarray:
    """Boundary cell centres whose polar angle lies in ``[lo_deg, hi_deg]``."""
    p = boundary_cells(c, grid_step).centres()
    ang = np.degrees(np.arctan2(p[:, 1], p[:, 0]))
    return p[(ang >= lo_deg) & (ang <= hi_deg)]


# ----------------------------------------------------------------------------
# distances and the conjugate map


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1, 2)
    if len(a) == 0 or len(b) == 0:
        return math.inf
    return float(max(cKDTree(b).query(a)[0].max(), cKDTree(a).query(b)[0].max()))


def densify(polyline: np.ndarray, spacing: float) -> np.ndarray:
    p = np.asarray(polyline, dtype=float)
    seg = np.diff(p, axis=0)
    n = np.maximum(1, np.ceil(np.hypot(*seg.T) / spacing).astype(int))
    parts = [p[i] + seg[i] * (np.arange(n[i])[:, None] / n[i]) for i in range(len(seg))]
    return np.concatenate(parts + [p[-1:]])


@dataclass
class ConsistencyReport:
    covered: float  # fraction of next-depth points inside the contracted copies
    in_annulus: float  # fraction of eliminated images beyond the annulus radius
    annulus_radius: float
    witness: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.covered == 1.0 and self.in_annulus == 1.0


def conj_consistency(c_n: PerpCloud, c_next: PerpCloud, eliminated: PerpCloud | None = None,
                     tol: float = 1e-9, annulus: float = 0.8) -> ConsistencyReport:
    """Check the perpendicular shadow of one step.

    (i) every point of ``c_next`` is ``SIGMA_BAR * q + p`` for some ``q`` in
    ``c_n`` and ``p`` in the perpendicular motif, within ``tol``;
    (ii) every eliminated image lies beyond ``annulus`` times the radius of
    ``c_next``.
    """
    from .gpsp import MOTIF

    s_perp = perp_float(MOTIF)
    tree = cKDTree(c_n.points)
    best = np.full(len(c_next), np.inf)
    for p in s_perp:
        d, _ = tree.query((c_next.points - p) / SIGMA_BAR)
        best = np.minimum(best, d * SIGMA_BAR)
    miss = best > tol
    witness = []
    if miss.any():
        i = int(np.nonzero(miss)[0][0])
        witness.append({"check": "inclusion", "point": c_next.points[i].tolist(), "distance": float(best[i])})
    radius = annulus * c_next.radius
    in_ann = 1.0
    if eliminated is not None and len(eliminated):
        r = np.hypot(*eliminated.points.T)
        inside = r <= radius
        in_ann = float(1.0 - inside.mean())
        if inside.any():
            i = int(np.nonzero(inside)[0][0])
            witness.append({"check": "annulus", "point": eliminated.points[i].tolist(), "radius": float(r[i])})
    covered = float(1.0 - miss.mean()) if len(c_next) else 1.0
    return ConsistencyReport(covered, in_ann, radius, witness)
