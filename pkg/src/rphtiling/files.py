"""Run configuration, JSON tiling files, SVG and CSV output.

Config files are plain text, one ``key = value`` per line, ``#`` starts a
comment.  Keys::

    seed        R | cluster | file:<tiling.json>      (default R)
    schedule    wheel strings and RANDOM(pl,pr,pm,pm') entries,
                separated by spaces or commas         (default LLLLLLLLLL)
    depth       number of steps, 0..12                (default: schedule length)
    master_seed unsigned 64-bit integer               (default 0)
    grid_step   window raster cell, 0.005..0.1        (default 0.02)
    clip        interior clip factor, (0, 1]          (default 0.8)
    flip_steps  Monte Carlo steps, >= 0               (default 10000)
    out         output path                           (default: stdout)
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gpsp import SEEDS, Schedule, seed_tiling
from .tiling import KINDS, StructuralFault, Tiling
from .window import GRID_RANGE

SCHEMA = "rph-tiling"
SCHEMA_VERSION = 1
U64 = 2**64 - 1


class ConfigError(ValueError):
    """Malformed configuration (CLI exit code 1)."""


class TilingFormatError(ValueError):
    """A tiling file that does not match the schema (CLI exit code 2)."""


# ----------------------------------------------------------------------------
# config


@dataclass
class RunConfig:
    seed: str = "R"
    schedule: str = "LLLLLLLLLL"
    depth: int | None = None
    master_seed: int = 0
    grid_step: float = 0.02
    clip: float = 0.8
    flip_steps: int = 10000
    out: str | None = None
    source: str = field(default="<defaults>", compare=False)

    def parsed_schedule(self) -> Schedule:
        try:
            return Schedule.parse(self.schedule)
        except ValueError as exc:
            raise ConfigError(f"schedule: {exc}") from exc

    def steps(self) -> int:
        return len(self.parsed_schedule()) if self.depth is None else self.depth

    def seed_tiling(self) -> Tiling:
        if self.seed.startswith("file:"):
            return read_tiling(self.seed[5:])
        return seed_tiling(self.seed)

    def validate(self) -> RunConfig:
        if not (self.seed in SEEDS or self.seed.startswith("file:")):
            raise ConfigError(f"seed: expected one of {sorted(SEEDS)} or file:<path>, got {self.seed!r}")
        self.parsed_schedule()
        if self.depth is not None and not 0 <= self.depth <= 12:
            raise ConfigError(f"depth must lie in 0..12, got {self.depth}")
        if not 0 <= self.master_seed <= U64:
            raise ConfigError(f"master_seed must be an unsigned 64-bit integer, got {self.master_seed}")
        lo, hi = GRID_RANGE
        if not lo <= self.grid_step <= hi:
            raise ConfigError(f"grid_step must lie in {lo}..{hi}, got {self.grid_step}")
        if not 0 < self.clip <= 1:
            raise ConfigError(f"clip must lie in (0, 1], got {self.clip}")
        if self.flip_steps < 0:
            raise ConfigError(f"flip_steps must be nonnegative, got {self.flip_steps}")
        return self

    def to_dict(self) -> dict:
        return {"seed": self.seed, "schedule": str(self.parsed_schedule()), "depth": self.steps(),
                "master_seed": self.master_seed, "grid_step": self.grid_step, "clip": self.clip}


_FIELDS = {"seed": str, "schedule": str, "depth": int, "master_seed": int, "grid_step": float,
           "clip": float, "flip_steps": int, "out": str}


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in _FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        try:
            values[key] = _FIELDS[key](value)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: {key} expects {_FIELDS[key].__name__}, got {value!r}") from None
    return RunConfig(**values, source=source).validate()


def read_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, str(path))


# ----------------------------------------------------------------------------
# JSON


def _round(x):
    if isinstance(x, dict):
        return {str(k): _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, np.ndarray):
        return _round(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(f"{x:.12g}") if math.isfinite(x) else None
    return x


def dumps(obj, indent: int | None = 1) -> str:
    """Deterministic JSON: sorted keys, floats at 12 significant digits, NaN as null."""
    return json.dumps(_round(obj), indent=indent, sort_keys=True, allow_nan=False) + "\n"


def tiling_to_dict(t: Tiling, provenance: dict | None = None) -> dict:
    ft = t.faces
    faces = [{"kind": KINDS[ft.kind[f]], "vertices": [int(i) for i in ft.cycle(f)],
              "boundary": bool(ft.boundary[f])} for f in range(len(ft))]
    out = {"schema": SCHEMA, "schema_version": SCHEMA_VERSION,
           "vertices": t.vertices.tolist(), "faces": faces}
    if provenance is not None:
        out["provenance"] = provenance
    return out


def tiling_from_dict(d: dict) -> Tiling:
    if not isinstance(d, dict) or d.get("schema") != SCHEMA:
        raise TilingFormatError("not an rph-tiling document")
    if "schema_version" not in d:
        raise TilingFormatError("schema_version is missing")
    if d["schema_version"] != SCHEMA_VERSION:
        raise TilingFormatError(f"unsupported schema_version {d['schema_version']!r}")
    verts = d.get("vertices")
    if not isinstance(verts, list) or not all(
            isinstance(v, list) and len(v) == 4 and all(isinstance(c, int) and not isinstance(c, bool) for c in v)
            for v in verts):
        raise TilingFormatError("vertices must be arrays of 4 integers")
    try:
        t = Tiling.from_points(np.array(verts, dtype=np.int64).reshape(-1, 4), check_crossings=False)
    except (StructuralFault, OverflowError) as exc:
        raise TilingFormatError(f"vertex set is not a valid tiling: {exc}") from exc
    if len(t.vertices) != len(verts) or not np.array_equal(t.vertices, np.array(verts, dtype=np.int64).reshape(-1, 4)):
        raise TilingFormatError("vertices must be distinct and in canonical order")
    faces = d.get("faces")
    if not isinstance(faces, list):
        raise TilingFormatError("faces must be a list")
    stored = []
    for f in faces:
        if not isinstance(f, dict) or f.get("kind") not in KINDS or not isinstance(f.get("vertices"), list):
            raise TilingFormatError("each face needs a kind tag and a vertex index list")
        idx = f["vertices"]
        if not all(isinstance(i, int) and 0 <= i < len(verts) for i in idx):
            raise TilingFormatError("face vertex index out of range")
        stored.append((f["kind"], tuple(idx)))
    derived = [(KINDS[t.faces.kind[f]], tuple(int(i) for i in t.faces.cycle(f))) for f in range(len(t.faces))]
    if stored != derived:
        raise TilingFormatError("stored faces do not match the faces of the vertex set")
    return t


def write_tiling(t: Tiling, path, provenance: dict | None = None) -> None:
    Path(path).write_text(dumps(tiling_to_dict(t, provenance)))


def read_tiling(path) -> Tiling:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise TilingFormatError(f"{path}: not JSON ({exc.msg})") from exc
    return tiling_from_dict(d)


# ----------------------------------------------------------------------------
# SVG and CSV

_CLASS = {"R": "r", "P": "p", "H": "h", "unknown": "u"}
_STYLE = ".r{fill:#d9a441}.p{fill:#5b8db8}.h{fill:#8cb369}.u{fill:#cccccc}" \
         "polygon{stroke:#222;stroke-width:0.03;stroke-linejoin:round}circle{fill:#222}"


def _bbox(xy: np.ndarray, pad: float) -> tuple:
    lo = xy.min(axis=0) - pad if len(xy) else np.zeros(2)
    hi = xy.max(axis=0) + pad if len(xy) else np.ones(2)
    return lo, hi


def tiling_svg(t: Tiling) -> str:
    """One ``<polygon>`` per face, class r/p/h (u for unfinished rim faces)."""
    xy = t.positions() * np.array([1.0, -1.0])  # SVG y points down
    lo, hi = _bbox(xy, 0.5)
    w, h = hi - lo
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{lo[0]:.4f} {lo[1]:.4f} {w:.4f} {h:.4f}">',
           f"<style>{_STYLE}</style>"]
    ft = t.faces
    for f in range(len(ft)):
        pts = " ".join(f"{x:.4f},{y:.4f}" for x, y in xy[ft.cycle(f)])
        out.append(f'<polygon class="{_CLASS[KINDS[ft.kind[f]]]}" points="{pts}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cloud_svg(points: np.ndarray, radius: float = 0.004) -> str:
    """Perpendicular cloud as one ``<circle>`` per point."""
    xy = np.asarray(points, dtype=float).reshape(-1, 2) * np.array([1.0, -1.0])
    lo, hi = _bbox(xy, 0.05)
    w, h = hi - lo
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{lo[0]:.4f} {lo[1]:.4f} {w:.4f} {h:.4f}">',
           f"<style>{_STYLE}</style>"]
    out.extend(f'<circle cx="{x:.6f}" cy="{y:.6f}" r="{radius:g}"/>' for x, y in xy)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cloud_csv(points: np.ndarray) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y"])
    for x, y in np.asarray(points, dtype=float).reshape(-1, 2):
        w.writerow([f"{x:.12g}", f"{y:.12g}"])
    return buf.getvalue()


def read_cloud_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(_io.StringIO(text)))
    if rows and rows[0] == ["x", "y"]:
        rows = rows[1:]
    return np.array([[float(x), float(y)] for x, y in rows]).reshape(-1, 2)
