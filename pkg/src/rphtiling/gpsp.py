"""Generalized point substitution for RPH tilings.

One step expands the vertex set by tau**2, replicates the centred-decagon
motif on every expanded vertex, and at every acute corner of an expanded
rhombus deletes one of the two candidates lying one unit from the corner.
Which one is deleted is keyed by the corner's direction (a wheel diagram) or
drawn at random per rhombus.

Corner directions: an acute corner whose two edges point along directions
``k`` and ``k+1`` (multiples of 36°) has its inward bisector at ``36k + 18``
degrees and is called corner ``k``.  Flag ``L`` deletes the candidate along
``k`` (clockwise of the bisector) and keeps the one along ``k+1``; flag ``R``
does the opposite.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .module import (DIRECTIONS, INFLATE_MATRIX, IndexLookup, ORIGIN, as_index, canonical,
                     check_range, rotate36)
from .tiling import R, UNKNOWN, StructuralFault, Tiling, build_edges, extract_faces, validate

log = logging.getLogger(__name__)

RULES = ("l", "r", "m", "m'")


@dataclass(frozen=True)
class WheelDiagram:
    """Ten chirality flags, index ``k`` for the acute corner with bisector ``36k + 18`` degrees."""

    chirality: str

    def __post_init__(self):
        if len(self.chirality) != 10 or set(self.chirality) - {"L", "R"}:
            raise ValueError(f"a wheel diagram is 10 characters over {{L, R}}, got {self.chirality!r}")

    @classmethod
    def parse(cls, text: str) -> WheelDiagram:
        return cls(text.strip().upper())

    @classmethod
    def uniform(cls, flag: str = "L") -> WheelDiagram:
        return cls(flag * 10)

    @classmethod
    def from_int(cls, code: int) -> WheelDiagram:
        """Bit ``k`` of ``code`` set means flag ``R`` at corner ``k``."""
        return cls("".join("R" if (code >> k) & 1 else "L" for k in range(10)))

    def __str__(self) -> str:
        return self.chirality

    def __getitem__(self, k: int) -> str:
        return self.chirality[k % 10]

    def rule(self, k: int) -> str:
        """Elimination rule for the rhombus with acute corners ``k`` and ``k+5``."""
        return rule_label(self[k], self[k + 5]) if k % 10 < 5 else rule_label(self[k + 5], self[k])

    def rotated(self, m: int) -> WheelDiagram:
        return WheelDiagram("".join(self[k - m] for k in range(10)))

    def mirrored(self) -> WheelDiagram:
        # reflection in the x axis sends bisector 36k+18 to 36(-k-1)+18 and reverses handedness
        return WheelDiagram("".join(_FLIP[self[-k - 1]] for k in range(10)))


_FLIP = {"L": "R", "R": "L"}


def rule_label(first: str, second: str) -> str:
    """Rule name from the flags at a rhombus's corners ``k`` and ``k+5`` (``k < 5``)."""
    if first == second:
        return "l" if first == "L" else "r"
    return "m" if first == "L" else "m'"


def rule_flags(rule: str) -> tuple[str, str]:
    """Inverse of :func:`rule_label`."""
    return {"l": ("L", "L"), "r": ("R", "R"), "m": ("L", "R"), "m'": ("R", "L")}[rule]


@dataclass(frozen=True)
class RandomRule:
    """Per-rhombus random choice among l, r, m, m'."""

    weights: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    stream: int = 0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (4,) or (w < 0).any() or w.sum() <= 0:
            raise ValueError(f"need four nonnegative weights with positive sum, got {self.weights}")

    def __str__(self) -> str:
        return "RANDOM(" + ",".join(f"{w:g}" for w in self.weights) + ")"

    def draw(self, n: int, master_seed: int, iteration: int) -> np.ndarray:
        """Rule indices for ``n`` rhombi in canonical order.

        Philox is counter based, so value ``i`` depends only on
        ``(master_seed, iteration, stream)`` and the ordinal ``i``.
        """
        ss = np.random.SeedSequence([master_seed & (2**64 - 1), iteration, self.stream])
        rng = np.random.Generator(np.random.Philox(ss))
        w = np.asarray(self.weights, dtype=float)
        return rng.choice(4, size=n, p=w / w.sum())


RuleSource = WheelDiagram | RandomRule


# ----------------------------------------------------------------------------
# motif and inflation


def motif() -> np.ndarray:
    """Centre ``[0000]`` and the ten shell points, the orbit of ``[1100]``."""
    pts = [ORIGIN, (1, 1, 0, 0)]
    for _ in range(9):
        pts.append(rotate36(pts[-1]))
    return np.array(pts, dtype=np.int64)


MOTIF = motif()
MOTIF.setflags(write=False)


def expand(vertices: np.ndarray) -> np.ndarray:
    """tau**2 times each vertex."""
    out = np.asarray(vertices, dtype=np.int64).reshape(-1, 4) @ INFLATE_MATRIX
    check_range(out)
    return out


def inflate(vertices) -> np.ndarray:
    """Candidate points: the motif placed on every tau**2-expanded vertex."""
    v = np.asarray(vertices, dtype=np.int64).reshape(-1, 4)
    if len(v) == 0:
        return v.copy()
    cand = (expand(v)[:, None, :] + MOTIF[None, :, :]).reshape(-1, 4)
    return canonical(cand)


def point_inflation_only(seed, n: int) -> np.ndarray:
    """Iterate :func:`inflate` ``n`` times with no elimination (the para-Penrose superset)."""
    pts = canonical(np.asarray(seed, dtype=np.int64).reshape(-1, 4))
    for _ in range(n):
        pts = inflate(pts)
    return pts


# ----------------------------------------------------------------------------
# elimination


@dataclass
class Corners:
    """Acute corners of the R faces of a tiling, one row per corner."""

    apex: np.ndarray  # vertex rows
    direction: np.ndarray  # corner index k in 0..9
    face: np.ndarray  # R face number
    rhombus: np.ndarray  # ordinal of the rhombus in canonical order


def acute_corners(t: Tiling) -> Corners:
    ft = t.faces
    rh = np.nonzero(ft.kind == R)[0]
    if len(rh) == 0:
        z = np.zeros(0, dtype=np.int64)
        return Corners(z, z, z, z)
    cyc = ft.indices[ft.ptr[rh][:, None] + np.arange(4)]
    # canonical start of an R face is an acute corner; the other one is two steps on
    apex = cyc[:, [0, 2]]
    out_dir = np.stack([_edge_dir(t, cyc[:, 0], cyc[:, 1]), _edge_dir(t, cyc[:, 2], cyc[:, 3])], axis=1)
    order = np.lexsort((out_dir[:, 0], apex.min(axis=1)))
    apex, out_dir, rh = apex[order], out_dir[order], rh[order]
    ordinal = np.repeat(np.arange(len(rh)), 2)
    return Corners(apex.reshape(-1), out_dir.reshape(-1), np.repeat(rh, 2), ordinal)


def _edge_dir(t: Tiling, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    nb = t.neighbours[a]
    hit = nb == b[:, None]
    if not hit.any(axis=1).all():
        raise StructuralFault("face cycle uses a missing edge")
    return hit.argmax(axis=1)


def corner_flags(corners: Corners, source: RuleSource, master_seed: int = 0, iteration: int = 0,
                 override: Callable[[int, int], str] | None = None) -> np.ndarray:
    """Flag ``'L'``/``'R'`` per corner row.

    For random rules the rhombus's first corner is the one with ``k < 5``.
    ``override(apex_row, k)`` may return a flag to force a single corner.
    """
    if isinstance(source, WheelDiagram):
        flags = np.array([source[k] for k in corners.direction], dtype="<U1")
    elif isinstance(source, RandomRule):
        choice = source.draw(int(corners.rhombus.max()) + 1 if len(corners.rhombus) else 0, master_seed, iteration)
        first_flag = np.array(["L", "R", "L", "R"], dtype="<U1")
        second_flag = np.array(["L", "R", "R", "L"], dtype="<U1")
        c = choice[corners.rhombus]
        flags = np.where(corners.direction < 5, first_flag[c], second_flag[c])
    else:
        raise TypeError(f"unsupported rule source {source!r}")
    if override is not None:
        for i, (a, k) in enumerate(zip(corners.apex, corners.direction)):
            forced = override(int(a), int(k))
            if forced is not None:
                flags[i] = forced
    return flags


@dataclass
class Elimination:
    kept: np.ndarray
    removed: np.ndarray
    designated: int
    flags: np.ndarray
    corners: Corners


def eliminate(candidates: np.ndarray, t: Tiling, source: RuleSource, master_seed: int = 0,
              iteration: int = 0, override=None) -> Elimination:
    """Remove one candidate per acute corner of every expanded rhombus of ``t``.

    ``candidates`` must be ``inflate(t.vertices)``; a designated point missing
    from it raises :class:`StructuralFault`.
    """
    candidates = np.asarray(candidates, dtype=np.int64)
    corners = acute_corners(t)
    if len(corners.apex) == 0:
        return Elimination(candidates, np.zeros((0, 4), dtype=np.int64), 0, np.zeros(0, dtype="<U1"), corners)
    flags = corner_flags(corners, source, master_seed, iteration, override)
    k_del = np.where(flags == "L", corners.direction, (corners.direction + 1) % 10)
    apex2 = expand(t.vertices[corners.apex])
    target = apex2 + DIRECTIONS[k_del]
    lookup = IndexLookup(candidates)
    rows = lookup.find(target)
    if (rows < 0).any():
        i = np.nonzero(rows < 0)[0][0]
        raise StructuralFault(f"designated candidate {tuple(target[i])} is not a candidate point")
    drop = np.zeros(len(candidates), dtype=bool)
    drop[rows] = True
    return Elimination(candidates[~drop], candidates[drop], len(rows), flags, corners)


# ----------------------------------------------------------------------------
# steps and schedules


@dataclass
class StepRecord:
    iteration: int
    rule: str
    candidates: int
    designated: int
    removed: int
    pruned: int
    vertices: int
    counts: dict
    stream: list | None = None  # Philox key (master_seed, iteration, stream) of a random entry


def prune_to_tiles(points: np.ndarray) -> Tiling:
    """Keep the vertices of complete R, P, H faces of a unit-connective point set.

    Candidates near the rim of a finite patch are never eliminated by the
    missing outside rhombi, so the rim carries leftover points that form
    non-prototile faces; this trims them.
    """
    es = build_edges(points, check_crossings=False)
    ft = extract_faces(es)
    proto = np.repeat(ft.kind != UNKNOWN, ft.sizes())
    keep = np.zeros(len(es.vertices), dtype=bool)
    keep[ft.indices[proto]] = True
    if keep.all():
        return Tiling(es.vertices, es, ft)
    return Tiling.from_points(es.vertices[keep], check_crossings=False)


def gpsp_step_detailed(t: Tiling, source: RuleSource, master_seed: int = 0, iteration: int = 0,
                       check: bool = True, override=None) -> tuple[Tiling, StepRecord, Elimination]:
    cand = inflate(t.vertices)
    elim = eliminate(cand, t, source, master_seed, iteration, override)
    out = prune_to_tiles(elim.kept)
    if check:
        validate(out).raise_for_faults()
    key = [master_seed, iteration, source.stream] if isinstance(source, RandomRule) else None
    rec = StepRecord(iteration, str(source), len(cand), elim.designated, len(elim.removed),
                     len(elim.kept) - len(out.vertices), len(out.vertices), out.counts(), key)
    log.debug("step %d %s: %d candidates, %d removed, %d trimmed, %d vertices", iteration, source,
              rec.candidates, rec.removed, rec.pruned, rec.vertices)
    return out, rec, elim


def gpsp_step(t: Tiling, source: RuleSource, master_seed: int = 0, iteration: int = 0,
              check: bool = True) -> Tiling:
    """One substitution step: inflate, eliminate, then rebuild edges and faces."""
    return gpsp_step_detailed(t, source, master_seed, iteration, check)[0]


@dataclass
class Schedule:
    entries: list

    def __post_init__(self):
        if not self.entries:
            raise ValueError("a schedule needs at least one entry")

    @classmethod
    def parse(cls, items: Sequence[str] | str) -> Schedule:
        if isinstance(items, str):
            items = _split_schedule(items)
        entries: list = []
        stream = 0
        for item in items:
            item = item.strip()
            if item.upper().startswith("RANDOM"):
                inner = item[item.index("(") + 1:item.rindex(")")] if "(" in item else ""
                w = tuple(float(x) for x in inner.split(",")) if inner.strip() else (1.0, 1.0, 1.0, 1.0)
                entries.append(RandomRule(w, stream))
                stream += 1
            else:
                entries.append(WheelDiagram.parse(item))
        return cls(entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> RuleSource:
        return self.entries[i % len(self.entries)]

    def __str__(self) -> str:
        return " ".join(str(e) for e in self.entries)

    def wheels(self) -> list[WheelDiagram]:
        return [e for e in self.entries if isinstance(e, WheelDiagram)]


def _split_schedule(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in " ,;\n\t":
            if cur:
                out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


@dataclass
class Provenance:
    master_seed: int
    schedule: str
    steps: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"master_seed": self.master_seed, "schedule": self.schedule,
                "steps": [vars(s) for s in self.steps]}


def run_sequence(seed: Tiling, schedule: Schedule, depth: int | None = None, master_seed: int = 0,
                 check: bool = True, keep_history: bool = False):
    """Apply ``depth`` steps (default: one pass over the schedule), cycling entries.

    Returns ``(tiling, provenance)``, or ``(tiling, provenance, history)`` with
    ``keep_history``.
    """
    depth = len(schedule) if depth is None else depth
    prov = Provenance(master_seed, str(schedule))
    history = [seed]
    t = seed
    for i in range(depth):
        t, rec, _ = gpsp_step_detailed(t, schedule[i], master_seed, i, check)
        prov.steps.append(rec)
        if keep_history:
            history.append(t)
    return (t, prov, history) if keep_history else (t, prov)


# ----------------------------------------------------------------------------
# seeds

SEEDS = {
    # edge vectors e0 and -e3 from the acute corner at the origin
    "R": [(0, 0, 0, 0), (1, 0, 0, 0), (1, 0, 0, -1), (0, 0, 0, -1)],
    # three R, two P and one H around a vertex of the all-L tiling whose
    # perpendicular image is close to the window centre
    "cluster": [(-1, -1, -1, 0), (-1, -1, 0, 0), (0, -1, -1, -1), (0, -1, -1, 0), (0, 0, -1, -1),
                (0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 1), (0, 1, 1, 0), (0, 1, 1, 1), (1, 0, 0, 0),
                (1, 1, 0, 0), (1, 1, 1, 0), (1, 1, 1, 1)],
}


def seed_tiling(name: str = "R") -> Tiling:
    if name not in SEEDS:
        raise KeyError(f"unknown seed {name!r}; known: {sorted(SEEDS)}")
    return Tiling.from_points(SEEDS[name])


def index_rows(points) -> list:
    return [as_index(p) for p in points]
