"""Simpleton flips: one vertex hops by a short step inside an R-P-H cluster.

A vertex shared by exactly one R, one P and one H tile (and nothing else) can
move by one of the ten short steps (length 1/tau, perpendicular length tau)
when the three tiles re-form around the new position.  The check is local
and exact: the new position may only touch the rim of the cluster, and the
three pieces it cuts the rim into must again be one R, one P and one H.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .golden import GoldenInt
from .module import DIRECTIONS, SHORT_STEPS, as_index, embed_par, embed_perp, perp_float
from .tiling import H, P, R, UNKNOWN, Tiling, validate

_DIR = {tuple(int(x) for x in d): k for k, d in enumerate(DIRECTIONS)}
_SHORT = [tuple(int(x) for x in s) for s in SHORT_STEPS]
_DIRS = [tuple(int(x) for x in d) for d in DIRECTIONS]

PAR_HOP2 = GoldenInt(2, -1)  # 1/tau**2
PERP_HOP2 = GoldenInt(1, 1)  # tau**2


@dataclass(frozen=True, order=True)
class FlipMove:
    vertex: tuple  # Index4 of the moving vertex
    hop: tuple  # short step, Index4

    def __post_init__(self):
        if self.hop not in _SHORT:
            raise ValueError(f"{self.hop} is not a short step")

    @property
    def target(self) -> tuple:
        return tuple(a + b for a, b in zip(self.vertex, self.hop))

    def reversed(self) -> FlipMove:
        return FlipMove(self.target, tuple(-h for h in self.hop))

    def par_length_exact(self) -> bool:
        return embed_par(self.hop).has_norm2(PAR_HOP2)

    def perp_length_exact(self) -> bool:
        return embed_perp(self.hop).has_norm2(PERP_HOP2)

    def to_dict(self) -> dict:
        return {"vertex": list(self.vertex), "hop": list(self.hop)}


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def classify_cycle(points: list) -> int:
    """Kind of a counter-clockwise unit-edge cycle given by Index4 points."""
    n = len(points)
    dirs = []
    for i in range(n):
        k = _DIR.get(_sub(points[(i + 1) % n], points[i]))
        if k is None:
            return UNKNOWN
        dirs.append(k)
    # interior angle at vertex i+1 in units of 36°
    ang = [(dirs[i] + 5 - dirs[(i + 1) % n]) % 10 for i in range(n)]
    if 0 in ang or sum(ang) != 5 * (n - 2):
        return UNKNOWN
    if n == 4 and sorted(ang) == [1, 1, 4, 4]:
        return R
    if n == 5 and ang.count(3) == 5:
        return P
    if n == 6 and ang.count(3) == 4 and ang.count(4) == 2:
        return H
    return UNKNOWN


class FlipState:
    """Mutable vertex/face bookkeeping for repeated flips.

    Vertex ids are stable: a flip changes the coordinates of one id.
    """

    def __init__(self, t: Tiling):
        self.coords = [tuple(int(x) for x in row) for row in t.vertices]
        self.lookup = {c: i for i, c in enumerate(self.coords)}
        self.faces: dict[int, tuple[int, tuple]] = {}
        self.vertex_faces: list[set] = [set() for _ in self.coords]
        ft = t.faces
        for f in range(len(ft)):
            self._add_face(int(ft.kind[f]), tuple(int(i) for i in ft.cycle(f)))
        # vertices on the outer walk never move
        self.rim = set()
        for loop in ft.outer:
            self.rim.update(int(i) for i in loop)
        self._next_face = len(ft)
        self.moves: list[tuple[int, tuple]] = []
        self._slot: dict[tuple[int, tuple], int] = {}
        for v in range(len(self.coords)):
            self._refresh(v)

    # faces --------------------------------------------------------------

    def _add_face(self, kind: int, cycle: tuple, fid: int | None = None) -> int:
        fid = len(self.faces) if fid is None else fid
        self.faces[fid] = (kind, cycle)
        for v in cycle:
            self.vertex_faces[v].add(fid)
        return fid

    def _drop_face(self, fid: int) -> None:
        _, cycle = self.faces.pop(fid)
        for v in cycle:
            self.vertex_faces[v].discard(fid)

    # move search --------------------------------------------------------

    def region(self, v: int):
        """Rim cycle of the R-P-H cluster around ``v``, or None when not flippable."""
        if v in self.rim:
            return None
        fs = self.vertex_faces[v]
        if len(fs) != 3:
            return None
        kinds = sorted(self.faces[f][0] for f in fs)
        if kinds != [R, P, H]:
            return None
        succ = {}
        for f in fs:
            cyc = self.faces[f][1]
            n = len(cyc)
            for i in range(n):
                a, b = cyc[i], cyc[(i + 1) % n]
                if a != v and b != v:
                    succ[a] = b
        start = min(succ)
        loop = [start]
        while True:
            nxt = succ.get(loop[-1])
            if nxt is None:
                return None
            if nxt == start:
                break
            loop.append(nxt)
            if len(loop) > len(succ):
                return None
        if len(loop) != len(succ):
            return None
        return loop

    def candidate_faces(self, v: int, hop: tuple, loop: list):
        """New (kind, cycle) triples if ``v`` can hop by ``hop``; else None."""
        target = _add(self.coords[v], hop)
        if target in self.lookup:
            return None
        on_loop = set(loop)
        touch = []
        for d in _DIRS:
            w = self.lookup.get(_add(target, d))
            if w is None:
                continue
            if w not in on_loop:
                return None
            touch.append(w)
        if len(touch) != 3:
            return None
        pos = {w: i for i, w in enumerate(loop)}
        cut = sorted(pos[w] for w in touch)
        out = []
        for j in range(3):
            a, b = cut[j], cut[(j + 1) % 3]
            arc = loop[a:b + 1] if a < b else loop[a:] + loop[:b + 1]
            cycle = tuple(arc) + (v,)
            kind = classify_cycle([self.coords[i] if i != v else target for i in cycle])
            if kind == UNKNOWN:
                return None
            out.append((kind, cycle))
        if sorted(k for k, _ in out) != [R, P, H]:
            return None
        return out

    def moves_at(self, v: int) -> list:
        loop = self.region(v)
        if loop is None:
            return []
        return [hop for hop in _SHORT if self.candidate_faces(v, hop, loop) is not None]

    def _refresh(self, v: int) -> None:
        for hop in _SHORT:
            key = (v, hop)
            if key in self._slot:
                self._remove_move(key)
        for hop in self.moves_at(v):
            self._slot[(v, hop)] = len(self.moves)
            self.moves.append((v, hop))

    def _remove_move(self, key) -> None:
        i = self._slot.pop(key)
        last = self.moves.pop()
        if i < len(self.moves):
            self.moves[i] = last
            self._slot[last] = i

    # apply --------------------------------------------------------------

    def apply(self, v: int, hop: tuple) -> None:
        loop = self.region(v)
        new = None if loop is None else self.candidate_faces(v, hop, loop)
        if new is None:
            raise ValueError(f"no flip of vertex {self.coords[v]} by {hop}")
        near = set(loop)
        for f in list(self.vertex_faces[v]):
            self._drop_face(f)
        del self.lookup[self.coords[v]]
        self.coords[v] = _add(self.coords[v], hop)
        self.lookup[self.coords[v]] = v
        for kind, cycle in new:
            self._add_face(kind, cycle, self._next_face)
            self._next_face += 1
        # availability can change for anything sharing a face with the cluster rim
        ring = {v} | near
        for w in near:
            for f in self.vertex_faces[w]:
                ring.update(self.faces[f][1])
        for w in sorted(ring):
            self._refresh(w)

    def vertices(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64).reshape(-1, 4)

    def counts(self) -> dict:
        kinds = [k for k, _ in self.faces.values()]
        return {"R": kinds.count(R), "P": kinds.count(P), "H": kinds.count(H)}

    def sorted_moves(self) -> list:
        return sorted(FlipMove(self.coords[v], hop) for v, hop in self.moves)


def find_flips(t: Tiling) -> list[FlipMove]:
    """All simpleton flips of ``t``, sorted."""
    return FlipState(t).sorted_moves()


def apply_flip(t: Tiling, m: FlipMove) -> Tiling:
    st = FlipState(t)
    v = st.lookup.get(tuple(m.vertex))
    if v is None or (v, tuple(m.hop)) not in st._slot:
        raise ValueError(f"flip {m} is not available")
    st.apply(v, tuple(m.hop))
    return Tiling.from_points(st.vertices(), check_crossings=False)


# ----------------------------------------------------------------------------
# Monte Carlo


@dataclass
class FlipTrace:
    seed: int
    moves: list = field(default_factory=list)  # FlipMove per step
    available: list = field(default_factory=list)  # moves on offer before each step
    rms_perp: list = field(default_factory=list)  # RMS perpendicular radius after each step
    counts: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)  # (step, validation ok, counts unchanged)
    stopped_early: bool = False

    def to_dict(self) -> dict:
        return {"seed": self.seed, "steps": len(self.moves), "stopped_early": self.stopped_early,
                "counts": self.counts, "moves": [m.to_dict() for m in self.moves],
                "available": self.available, "rms_perp": self.rms_perp,
                "checks": [list(c) for c in self.checks]}


def monte_carlo_flips(t: Tiling, steps: int, seed: int, check_every: int = 100) -> tuple[Tiling, FlipTrace]:
    """Apply ``steps`` uniformly chosen flips; validate every ``check_every`` steps."""
    st = FlipState(t)
    rng = np.random.default_rng(seed)
    trace = FlipTrace(seed, counts=st.counts())
    q = perp_float(st.vertices())
    sq = (q * q).sum(axis=1)
    total = float(sq.sum())
    n = max(len(sq), 1)
    for step in range(1, steps + 1):
        if not st.moves:
            trace.stopped_early = True
            break
        trace.available.append(len(st.moves))
        # pick among a canonical ordering so the draw does not depend on bookkeeping order
        order = sorted(range(len(st.moves)), key=lambda i: (st.coords[st.moves[i][0]], st.moves[i][1]))
        v, hop = st.moves[order[int(rng.integers(len(order)))]]
        trace.moves.append(FlipMove(st.coords[v], hop))
        st.apply(v, hop)
        p = perp_float(np.array([st.coords[v]]))[0]
        total += float(p @ p) - sq[v]
        sq[v] = float(p @ p)
        trace.rms_perp.append(float(np.sqrt(total / n)))
        if check_every and step % check_every == 0:
            snap = Tiling.from_points(st.vertices(), check_crossings=False)
            trace.checks.append((step, bool(validate(snap)), snap.counts() == _with_unknown(trace.counts, snap)))
    return Tiling.from_points(st.vertices(), check_crossings=False), trace


def _with_unknown(counts: dict, t: Tiling) -> dict:
    out = dict(counts)
    out["unknown"] = t.counts()["unknown"]
    return out
