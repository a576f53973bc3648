"""The decagonal Bravais module, its parallel and perpendicular embeddings.

Points are indexed by four integers ``(n0, n1, n2, n3)`` meaning
``n0 e0 + n1 e1 + n2 e2 + n3 e3`` with ``e_j = (cos 72j°, sin 72j°)``; the
fifth axis is always folded back via ``e4 = -(e0 + e1 + e2 + e3)``.  The
perpendicular image uses ``e_j -> e_{2j mod 5}``.

Scalar helpers take and return plain tuples; the ``*_array`` variants work on
``(N, 4)`` integer arrays and are what the substitution engine uses.
"""

from __future__ import annotations

import math

import numpy as np

from .golden import GoldenCoord, GoldenInt, TAU, SIN72

Index4 = tuple[int, int, int, int]

ORIGIN: Index4 = (0, 0, 0, 0)

# the five axes as 4-index vectors
AXES = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, -1, -1, -1]],
                dtype=np.int64)

# DIRECTIONS[k] is the unit step pointing at angle 36k°
DIRECTIONS = np.zeros((10, 4), dtype=np.int64)
for _j in range(5):
    DIRECTIONS[(2 * _j) % 10] = AXES[_j]
    DIRECTIONS[(2 * _j + 5) % 10] = -AXES[_j]
DIRECTIONS.setflags(write=False)

# exact coordinates of e_j: x = (xa + xb tau)/2, y = s (ya + yb tau)/2
_X2 = np.array([[2, 0], [-1, 1], [0, -1], [0, -1], [-1, 1]], dtype=np.int64)
_Y2 = np.array([[0, 0], [2, 0], [-2, 2], [2, -2], [-2, 0]], dtype=np.int64)
_PERP_AXIS = np.array([0, 2, 4, 1, 3])  # e_j -> e_{2j mod 5}

_ANG = 2.0 * np.pi / 5.0 * np.arange(5)
_PAR_F = np.stack([np.cos(_ANG[:4]), np.sin(_ANG[:4])], axis=1)
_PERP_F = np.stack([np.cos(_ANG[_PERP_AXIS[:4]]), np.sin(_ANG[_PERP_AXIS[:4]])], axis=1)


def _fold5(m5: np.ndarray) -> np.ndarray:
    return m5[..., :4] - m5[..., 4:5]


def _image_of_axes(axis_map) -> np.ndarray:
    rows = []
    for j in range(4):
        m5 = np.zeros(5, dtype=np.int64)
        for target, coef in axis_map(j):
            m5[target % 5] += coef
        rows.append(_fold5(m5))
    # row j is the image of e_j, so ``index @ M`` applies the map
    return np.array(rows, dtype=np.int64)


# tau e_j = e_{j-1} + e_j + e_{j+1}
TAU_MATRIX = _image_of_axes(lambda j: [(j - 1, 1), (j, 1), (j + 1, 1)])
# rotation by 36°: e_j -> -e_{j+3}
ROT36_MATRIX = _image_of_axes(lambda j: [(j + 3, -1)])
# reflection in the x axis: e_j -> e_{-j}
MIRROR_MATRIX = _image_of_axes(lambda j: [(-j, 1)])
INFLATE_MATRIX = TAU_MATRIX @ TAU_MATRIX

for _m in (TAU_MATRIX, ROT36_MATRIX, MIRROR_MATRIX, INFLATE_MATRIX):
    _m.setflags(write=False)

UNIT_STEPS = DIRECTIONS
# short steps +-(e_j + e_{j+2}); SHORT_STEPS[k] points at angle 36k° with length 1/tau
TAU_INV_MATRIX = np.linalg.inv(TAU_MATRIX).round().astype(np.int64)
SHORT_STEPS = DIRECTIONS @ TAU_INV_MATRIX
SHORT_STEPS.setflags(write=False)


def as_index(p) -> Index4:
    t = tuple(int(v) for v in p)
    if len(t) != 4:
        raise ValueError(f"an Index4 has four components, got {len(t)}")
    return t  # type: ignore[return-value]


def _apply(matrix: np.ndarray, p) -> Index4:
    v = np.asarray(p, dtype=object) @ matrix.astype(object)
    out = tuple(int(x) for x in v)
    for x in out:
        if abs(x) > 2**62:
            raise OverflowError(f"index component {x} out of range")
    return out  # type: ignore[return-value]


def tau_scale(p) -> Index4:
    """Index of ``tau * p``."""
    return _apply(TAU_MATRIX, p)


def rotate36(p) -> Index4:
    return _apply(ROT36_MATRIX, p)


def mirror_x(p) -> Index4:
    return _apply(MIRROR_MATRIX, p)


def add(p, q) -> Index4:
    return tuple(int(a) + int(b) for a, b in zip(p, q))  # type: ignore[return-value]


def _coord(p, perp: bool) -> GoldenCoord:
    n = as_index(p)
    xa = xb = ya = yb = 0
    for j, c in enumerate(n):
        axis = _PERP_AXIS[j] if perp else j
        xa += c * int(_X2[axis, 0])
        xb += c * int(_X2[axis, 1])
        ya += c * int(_Y2[axis, 0])
        yb += c * int(_Y2[axis, 1])
    # y = s (ya + yb tau) / 2 maps to the q-part of the y coordinate
    return GoldenCoord(xp=GoldenInt(xa, xb), yq=GoldenInt(ya, yb))


def embed_par(p) -> GoldenCoord:
    """Exact physical-space position of an index."""
    return _coord(p, perp=False)


def embed_perp(p) -> GoldenCoord:
    """Exact perpendicular-space position of an index."""
    return _coord(p, perp=True)


# ----------------------------------------------------------------------------
# array versions

def par_float(idx: np.ndarray) -> np.ndarray:
    return np.asarray(idx, dtype=np.float64) @ _PAR_F


def perp_float(idx: np.ndarray) -> np.ndarray:
    return np.asarray(idx, dtype=np.float64) @ _PERP_F


def exact_coords(idx: np.ndarray, perp: bool = False) -> np.ndarray:
    """``(N, 4)`` int64 array ``[xa, xb, ya, yb]``.

    ``x = (xa + xb tau)/2`` and ``y = sin72 (ya + yb tau)/2``.
    """
    idx = np.asarray(idx, dtype=np.int64)
    axes = _PERP_AXIS[:4] if perp else np.arange(4)
    table = np.concatenate([_X2[axes], _Y2[axes]], axis=1)
    return idx @ table


def exact_to_float(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=np.float64)
    return np.stack([(c[..., 0] + c[..., 1] * TAU) / 2.0,
                     SIN72 * (c[..., 2] + c[..., 3] * TAU) / 2.0], axis=-1)


def tau_scale_array(idx: np.ndarray, times: int = 1) -> np.ndarray:
    out = np.asarray(idx, dtype=np.int64)
    for _ in range(times):
        out = out @ TAU_MATRIX
    check_range(out)
    return out


def rotate_array(idx: np.ndarray, steps: int = 1) -> np.ndarray:
    m = np.linalg.matrix_power(ROT36_MATRIX, steps % 10)
    return np.asarray(idx, dtype=np.int64) @ m


def mirror_array(idx: np.ndarray) -> np.ndarray:
    return np.asarray(idx, dtype=np.int64) @ MIRROR_MATRIX


def group_matrix(rotation: int, mirror: bool) -> np.ndarray:
    """Index-space matrix of ``rot36**rotation`` preceded by an optional mirror."""
    m = np.linalg.matrix_power(ROT36_MATRIX, rotation % 10)
    return MIRROR_MATRIX @ m if mirror else m


_KEY_BITS = 16
_KEY_OFFSET = 1 << (_KEY_BITS - 1)
KEY_LIMIT = _KEY_OFFSET - 1


def check_range(idx: np.ndarray, limit: int = 2**62) -> None:
    if idx.size and np.abs(idx).max() > limit:
        raise OverflowError("index components exceed the supported range")


def pack_keys(idx: np.ndarray) -> np.ndarray:
    """Injective int64 key per index row (components limited to 16 bits)."""
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size and np.abs(idx).max() > KEY_LIMIT:
        raise OverflowError(f"index components exceed ±{KEY_LIMIT}; patch too deep for packed keys")
    u = (idx + _KEY_OFFSET).astype(np.uint64)
    key = (u[:, 0] << np.uint64(48)) | (u[:, 1] << np.uint64(32)) | (u[:, 2] << np.uint64(16)) | u[:, 3]
    return key.view(np.int64) ^ np.int64(-(2**63))  # order-preserving shift to signed


def unpack_keys(keys: np.ndarray) -> np.ndarray:
    u = (np.asarray(keys, dtype=np.int64) ^ np.int64(-(2**63))).view(np.uint64)
    mask = np.uint64(0xFFFF)
    cols = [(u >> np.uint64(s)) & mask for s in (48, 32, 16, 0)]
    return np.stack(cols, axis=1).astype(np.int64) - _KEY_OFFSET


def canonical(idx: np.ndarray) -> np.ndarray:
    """Deduplicate and sort index rows lexicographically."""
    keys = np.unique(pack_keys(idx))
    return unpack_keys(keys)


class IndexLookup:
    """Row lookup for a canonical (sorted, unique) index array."""

    def __init__(self, idx: np.ndarray):
        self.keys = pack_keys(idx)
        if self.keys.size > 1 and not np.all(np.diff(self.keys) > 0):
            raise ValueError("index array must be canonical (sorted, unique)")

    def find(self, query: np.ndarray) -> np.ndarray:
        """Row numbers of ``query`` rows, ``-1`` where absent."""
        query = np.asarray(query, dtype=np.int64)
        if query.size == 0:
            return np.zeros(0, dtype=np.int64)
        if np.abs(query).max() > KEY_LIMIT:
            ok = np.all(np.abs(query) <= KEY_LIMIT, axis=1)
            out = np.full(len(query), -1, dtype=np.int64)
            out[ok] = self.find(query[ok])
            return out
        q = pack_keys(query)
        pos = np.searchsorted(self.keys, q)
        pos_c = np.minimum(pos, max(len(self.keys) - 1, 0))
        if len(self.keys) == 0:
            return np.full(len(q), -1, dtype=np.int64)
        hit = self.keys[pos_c] == q
        return np.where(hit, pos_c, -1)


def direction_angle(k: int) -> float:
    return math.pi / 5.0 * (k % 10)
