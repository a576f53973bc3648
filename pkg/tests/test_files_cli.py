import json
import subprocess
import sys

import numpy as np
import pytest

from rphtiling.cli import analysis_report, main
from rphtiling.files import (ConfigError, TilingFormatError, cloud_csv, cloud_svg, dumps, parse_config,
                             read_cloud_csv, read_tiling, tiling_from_dict, tiling_svg, tiling_to_dict,
                             write_tiling)
from rphtiling.gpsp import seed_tiling
from rphtiling.window import perp_cloud

GOOD = """
# all-L from the single rhombus
seed = R
schedule = LLLLLLLLLL
depth = 3
master_seed = 7
"""


def test_parse_config():
    cfg = parse_config(GOOD)
    assert (cfg.seed, cfg.depth, cfg.master_seed, cfg.steps()) == ("R", 3, 7, 3)
    assert str(cfg.parsed_schedule()) == "LLLLLLLLLL"
    assert parse_config("schedule = LLLLLLLLLL RRRRRRRRRR").steps() == 2


@pytest.mark.parametrize("text", [
    "depth 3",
    "colour = red",
    "depth = 3\ndepth = 4",
    "depth =",
    "depth = three",
    "depth = 40",
    "master_seed = -1",
    f"master_seed = {2**64}",
    "grid_step = 0.5",
    "clip = 0",
    "seed = kite",
    "schedule = LLL",
    "schedule = RANDOM(1,1)",
])
def test_bad_config(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_dumps_twelve_digits():
    text = dumps({"b": 1 / 3, "a": [np.float64(2.0 / 3.0), np.int64(3)], "c": float("nan")}, indent=None)
    assert text == '{"a": [0.666666666667, 3], "b": 0.333333333333, "c": null}\n'


def test_tiling_roundtrip(tiling, tmp_path):
    t = tiling("R", depth=3)
    d = tiling_to_dict(t)
    assert d["schema_version"] == 1
    assert all(isinstance(c, int) for v in d["vertices"] for c in v)
    assert {f["kind"] for f in d["faces"]} <= {"R", "P", "H", "unknown"}
    assert tiling_from_dict(json.loads(dumps(d))) == t
    write_tiling(t, tmp_path / "t.json")
    assert read_tiling(tmp_path / "t.json") == t


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("schema_version"),
    lambda d: d.update(schema_version=2),
    lambda d: d.update(schema="other"),
    lambda d: d["vertices"][0].append(0),
    lambda d: d["vertices"].__setitem__(0, [0.5, 0, 0, 0]),
    lambda d: d["vertices"].reverse(),
    lambda d: d["faces"][0].update(kind="P"),
    lambda d: d["faces"].pop(),
    lambda d: d["faces"][0]["vertices"].append(10**6),
])
def test_bad_tiling_documents(tiling, mutate):
    d = json.loads(dumps(tiling_to_dict(tiling("R", depth=2))))
    mutate(d)
    with pytest.raises(TilingFormatError):
        tiling_from_dict(d)


def test_svg_and_csv(tiling):
    t = tiling("R", depth=3)
    svg = tiling_svg(t)
    assert svg.count("<polygon") == len(t.faces)
    for cls, kind in (("r", "R"), ("p", "P"), ("h", "H")):
        assert svg.count(f'class="{cls}"') == t.counts()[kind]
    c = perp_cloud(t)
    assert cloud_svg(c.points).count("<circle") == len(c)
    back = read_cloud_csv(cloud_csv(c.points))
    assert back == pytest.approx(c.points, abs=1e-11)


def test_degenerate_report():
    rep = analysis_report(seed_tiling("R"))
    assert rep["frequencies"]["counts"] == {"R": 1, "P": 0, "H": 0}
    assert rep["degenerate"]["window"] and rep["degenerate"]["fractal"] and rep["degenerate"]["density"]


# command line -----------------------------------------------------------------


def run(*args):
    return main([str(a) for a in args])


def test_generate_and_rerun(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(GOOD)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("generate", "--config", cfg, "--out", a) == 0
    assert run("generate", "--config", cfg, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["provenance"]["config"]["master_seed"] == 7
    assert len(read_tiling(a).vertices) == 254


def test_seed_and_depth_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("schedule = RANDOM\n")
    outs = []
    for seed in (1, 2):
        out = tmp_path / f"r{seed}.json"
        assert run("generate", "--config", cfg, "--seed", seed, "--depth", 3, "--out", out) == 0
        outs.append(read_tiling(out))
    assert outs[0] != outs[1]


def test_exit_codes(tmp_path):
    bad_cfg = tmp_path / "bad.cfg"
    bad_cfg.write_text("depth = lots\n")
    assert run("generate", "--config", bad_cfg) == 1
    assert run("generate", "--config", tmp_path / "missing.cfg") == 1
    assert run("generate", "--seed", -3) == 1
    assert run("generate", "--bogus") == 1
    assert run("no-such-command") == 1
    broken = tmp_path / "broken.json"
    broken.write_text('{"schema": "rph-tiling", "vertices": []}')
    assert run("analyze", broken) == 2
    broken.write_text("not json")
    assert run("export-svg", broken) == 2


def test_invalid_tiling_rejected(tmp_path, tiling):
    # a vertex set with an interior hole passes the schema but fails validation
    t = tiling("R", depth=3)
    pos = t.positions()
    i = int(np.argmin(np.hypot(*(pos - pos.mean(axis=0)).T)))
    from rphtiling.tiling import Tiling
    holed = Tiling.from_points(np.delete(t.vertices, i, axis=0), check_crossings=False)
    path = tmp_path / "holed.json"
    write_tiling(holed, path)
    assert run("analyze", path) == 2
    assert run("flip-mc", path, "--steps", 5) == 2


def test_other_commands(tmp_path, tiling):
    path = tmp_path / "t.json"
    write_tiling(tiling("R", depth=3), path)
    table = tmp_path / "table.json"
    assert run("classify-wheels", "--out", table) == 0
    assert len(json.loads(table.read_text())) == 1024
    svg, csv = tmp_path / "t.svg", tmp_path / "t.csv"
    assert run("export-svg", path, "--out", svg) == 0
    assert svg.read_text().count("<polygon") == len(read_tiling(path).faces)
    assert run("export-svg", path, "--perp", "--csv", csv, "--out", tmp_path / "p.svg") == 0
    assert len(read_cloud_csv(csv.read_text())) == 254
    flipped, trace = tmp_path / "f.json", tmp_path / "trace.json"
    assert run("flip-mc", path, "--steps", 150, "--seed", 3, "--out", flipped, "--trace", trace) == 0
    assert read_tiling(flipped).counts() == read_tiling(path).counts()
    assert json.loads(trace.read_text())["steps"] == 150
    report = tmp_path / "report.json"
    assert run("analyze", path, "--out", report) == 0
    assert set(json.loads(report.read_text())) >= {"density", "window", "fractal", "symmetry", "degenerate"}


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "rphtiling", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "generate" in out.stdout
