"""Point groups of wheel diagrams, schedules and perpendicular clouds.

Elements of D10 are pairs ``(m, mirror)``: reflect in the x axis when
``mirror`` is set, then rotate by ``36 m`` degrees.  On a wheel a rotation
shifts corner indices, ``k -> k + m``; a reflection sends corner ``k`` to
``m - k - 1`` and swaps L and R, since it reverses handedness.  In
perpendicular space a 36° turn of the tiling is a 252° turn of the cloud and
the x reflection stays an x reflection.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .gpsp import RandomRule, WheelDiagram

Element = tuple  # (m, mirror)

IDENTITY: Element = (0, False)
ALL_ELEMENTS = tuple((m, f) for f in (False, True) for m in range(10))
PERP_TURN = 7  # perpendicular image of one 36° step, in 36° units


def compose(g: Element, h: Element) -> Element:
    """``g`` after ``h``."""
    gm, gf = g
    hm, hf = h
    return ((gm + (-hm if gf else hm)) % 10, gf != hf)


def closure(gens) -> frozenset:
    out = {IDENTITY}
    frontier = list(gens)
    while frontier:
        g = frontier.pop()
        if g in out:
            continue
        out.add(g)
        frontier.extend(compose(g, h) for h in list(out))
        frontier.extend(compose(h, g) for h in list(out))
    return frozenset(out)


@dataclass(frozen=True)
class PointGroup:
    elements: frozenset

    @property
    def rotation_order(self) -> int:
        return sum(1 for m, f in self.elements if not f)

    @property
    def mirror_axes(self) -> tuple:
        """Axis angles in units of 18° (element ``(m, True)`` fixes the line at ``18 m``°)."""
        return tuple(sorted(m for m, f in self.elements if f))

    @property
    def label(self) -> str:
        n = self.rotation_order
        return f"{'D' if self.mirror_axes else 'C'}{n}"

    @property
    def order(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        return self.label

    def __and__(self, other: PointGroup) -> PointGroup:
        return PointGroup(self.elements & other.elements)

    def to_dict(self) -> dict:
        return {"label": self.label, "rotation_order": self.rotation_order,
                "mirror_axes": list(self.mirror_axes)}


@lru_cache(maxsize=1)
def subgroups() -> tuple:
    """Every subgroup of D10, largest first; dihedral groups are two-generated."""
    found = {closure(pair) for pair in itertools.product(ALL_ELEMENTS, repeat=2)}
    return tuple(sorted(found, key=lambda s: (-len(s), sorted(s))))


def act_on_wheel(g: Element, w: WheelDiagram) -> WheelDiagram:
    m, f = g
    return (w.mirrored() if f else w).rotated(m)


def stabilizer(w: WheelDiagram) -> frozenset:
    return frozenset(g for g in ALL_ELEMENTS if act_on_wheel(g, w) == w)


def classify_wheel(w: WheelDiagram) -> PointGroup:
    return PointGroup(stabilizer(w))


def sequence_group(ws) -> PointGroup:
    """Common subgroup of the schedule's wheels.

    A random entry contributes only the identity: its realizations carry no
    rotation or mirror that holds rhombus by rhombus.
    """
    ws = list(ws)
    if not ws:
        raise ValueError("empty schedule")
    out = frozenset(ALL_ELEMENTS)
    for w in ws:
        if isinstance(w, RandomRule):
            out &= {IDENTITY}
        else:
            out &= stabilizer(w)
    return PointGroup(out)


def perp_matrix(g: Element) -> np.ndarray:
    m, f = g
    a = math.radians(36.0 * PERP_TURN * m)
    rot = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
    return rot @ np.diag([1.0, -1.0]) if f else rot


def symmetry_defects(points: np.ndarray) -> dict:
    """Hausdorff distance between the cloud and its image under each element."""
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    tree = cKDTree(p)
    out = {}
    for g in ALL_ELEMENTS:
        q = p @ perp_matrix(g).T
        out[g] = float(max(tree.query(q)[0].max(), cKDTree(q).query(p)[0].max()))
    return out


def empirical_symmetry(c, tolerance: float | None = None) -> PointGroup:
    """Largest subgroup of D10 mapping the cloud to itself within ``tolerance``.

    The default tolerance is 0.01 of the cloud diameter.  Point sets more
    symmetric than any tiling (a lone point, say) come back as D10.
    """
    p = np.asarray(getattr(c, "points", c), dtype=float).reshape(-1, 2)
    if tolerance is None:
        tolerance = 0.01 * float(np.ptp(p, axis=0).max()) if len(p) > 1 else 0.0
    defects = symmetry_defects(p)
    ok = {g for g, d in defects.items() if d <= tolerance + 1e-12}
    for s in subgroups():
        if s <= ok:
            return PointGroup(s)
    return PointGroup(frozenset({IDENTITY}))


def classification_table() -> dict:
    """Wheel string -> point-group label for all 1024 wheels, in code order."""
    return {str(w): classify_wheel(w).label for w in (WheelDiagram.from_int(i) for i in range(1024))}


def table_json(table: dict | None = None) -> str:
    return json.dumps(classification_table() if table is None else table, indent=1, sort_keys=True) + "\n"
