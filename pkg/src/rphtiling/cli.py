"""Command line: generate, analyze, classify-wheels, flip-mc, export-svg.

Exit codes: 0 success, 1 malformed config or arguments, 2 validation failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import flips, gpsp, stats, symmetry, window
from .files import (ConfigError, RunConfig, TilingFormatError, cloud_csv, cloud_svg, dumps,
                    read_config, read_tiling, tiling_svg, tiling_to_dict)
from .tiling import StructuralFault, Tiling, validate

log = logging.getLogger("rphtiling")

EXIT_OK, EXIT_CONFIG, EXIT_INVALID = 0, 1, 2
MIN_POINTS = 100  # fewer vertices or raster cells than this make a statistic meaningless


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which means "invalid tiling" here
        raise ConfigError(message)


def analysis_report(t: Tiling, grid_step: float = window.DEFAULT_GRID, clip: float = stats.DEFAULT_CLIP) -> dict:
    """Densities, window area, boundary dimension and symmetry of one tiling."""
    freq = stats.tile_frequencies(t, clip)
    report = {"vertices": len(t.vertices), "counts": t.counts(),
              "frequencies": {"counts": freq.counts, "ratios": freq.ratios}}
    flags = {"frequencies": freq.degenerate}
    try:
        dens = stats.density_report(t, clip)
        report["density"] = dens.to_dict()
        flags["density"] = dens.v * dens.patch_area < MIN_POINTS
    except ValueError:
        report["density"] = None
        flags["density"] = True
    cloud = window.perp_cloud(t)
    area = window.window_area(cloud, grid_step)
    # about one point per boundary cell on average; hole filling copes with the gaps
    bgrid = max(window.BOUNDARY_GRID, math.sqrt(max(area, 1e-12) / len(cloud)))
    bgrid = min(bgrid, min(window.DEFAULT_SCALES))
    fit = window.box_dimension(window.boundary_cells(cloud, bgrid))
    sym = symmetry.empirical_symmetry(cloud)
    report["window"] = {"area": area, "grid_step": grid_step, "points": len(cloud),
                        "expected_area": stats.WINDOW_AREA}
    report["fractal"] = dict(fit.to_dict(), grid_step=bgrid, expected=window.ANALYTIC_DIMENSION)
    report["symmetry"] = sym.to_dict()
    flags["fractal"] = fit.degenerate
    cells = area / grid_step**2
    flags["window"] = bool(cells < MIN_POINTS or len(cloud) < 4.0 * cells)  # want 4 points per cell
    report["degenerate"] = flags
    return report


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> RunConfig:
    cfg = read_config(args.config) if args.config else RunConfig().validate()
    if getattr(args, "seed", None) is not None:
        cfg.master_seed = args.seed
    if getattr(args, "depth", None) is not None:
        cfg.depth = args.depth
    if getattr(args, "out", None):
        cfg.out = args.out
    return cfg.validate()


def cmd_generate(args) -> int:
    cfg = _config(args)
    schedule = cfg.parsed_schedule()
    seed = cfg.seed_tiling()
    t, prov = gpsp.run_sequence(seed, schedule, cfg.steps(), cfg.master_seed, check=True)
    rep = validate(t)
    if not rep.ok:
        log.error("generated tiling fails validation: %s", rep.first)
        return EXIT_INVALID
    _emit(dumps(tiling_to_dict(t, {"config": cfg.to_dict(), "steps": prov.to_dict()["steps"]})), cfg.out)
    return EXIT_OK


def _load(path) -> Tiling:
    t = read_tiling(path)
    rep = validate(t)
    if not rep.ok:
        raise StructuralFault(rep.first, rep.location)
    return t


def cmd_analyze(args) -> int:
    cfg = _config(args)
    t = _load(args.tiling)
    _emit(dumps(analysis_report(t, cfg.grid_step, cfg.clip)), cfg.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    _emit(symmetry.table_json(), args.out)
    return EXIT_OK


def cmd_flip_mc(args) -> int:
    cfg = _config(args)
    t = _load(args.tiling)
    steps = cfg.flip_steps if args.steps is None else args.steps
    if steps < 0:
        raise ConfigError("steps must be nonnegative")
    final, trace = flips.monte_carlo_flips(t, steps, cfg.master_seed)
    if not all(ok and same for _, ok, same in trace.checks):
        log.error("flip trace failed a validity spot-check")
        return EXIT_INVALID
    _emit(dumps(tiling_to_dict(final, {"flip_mc": {"seed": cfg.master_seed, "steps": len(trace.moves)}})), cfg.out)
    if args.trace:
        Path(args.trace).write_text(dumps(trace.to_dict()))
    return EXIT_OK


def cmd_export_svg(args) -> int:
    t = _load(args.tiling)
    cloud = window.perp_cloud(t)
    _emit(cloud_svg(cloud.points) if args.perp else tiling_svg(t), args.out)
    if args.csv:
        Path(args.csv).write_text(cloud_csv(cloud.points))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="plain-text key = value run configuration")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    def u64(text):
        v = int(text)
        if not 0 <= v < 2**64:
            raise ValueError
        return v

    u64.__name__ = "u64"
    seeded = _Parser(add_help=False)
    seeded.add_argument("--seed", type=u64, help="master seed, unsigned 64-bit")
    seeded.add_argument("--depth", type=int, help="number of substitution steps")

    ap = _Parser(prog="rphtiling", description="RPH tilings by generalized point substitution.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("generate", parents=[common, seeded], help="run a schedule and write the tiling JSON")
    p.set_defaults(func=cmd_generate)
    p = sub.add_parser("analyze", parents=[common, seeded], help="density, window and symmetry report")
    p.add_argument("tiling")
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("classify-wheels", parents=[common], help="point group of all 1024 wheels")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("flip-mc", parents=[common, seeded], help="random simpleton flips")
    p.add_argument("tiling")
    p.add_argument("--steps", type=int)
    p.add_argument("--trace", help="write the move trace JSON here")
    p.set_defaults(func=cmd_flip_mc)
    p = sub.add_parser("export-svg", parents=[common], help="render tiles, or the perpendicular cloud")
    p.add_argument("tiling")
    p.add_argument("--perp", action="store_true", help="draw the perpendicular cloud instead")
    p.add_argument("--csv", help="also write the perpendicular cloud as CSV")
    p.set_defaults(func=cmd_export_svg)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        print(f"rphtiling: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"rphtiling: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (StructuralFault, TilingFormatError) as exc:
        print(f"rphtiling: validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"rphtiling: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
