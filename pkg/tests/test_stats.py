import math

import numpy as np
import pytest

from conftest import ALL_L, ALL_R, history
from rphtiling.golden import TAU
from rphtiling.gpsp import seed_tiling
from rphtiling.module import DIRECTIONS
from rphtiling.stats import (A_R, FREQUENCY, OMEGA4, TILE_DENSITY, VERTEX_DENSITY, DensityReport, clip_region,
                             density_report, equation_residuals, substitution_matrix_estimate, tile_frequencies)
from rphtiling.tiling import AREA, Tiling


def test_constants():
    assert A_R == pytest.approx(0.587785, abs=1e-6)
    assert VERTEX_DENSITY == pytest.approx(0.94046, abs=1e-5)
    assert [TILE_DENSITY[k] for k in "RPH"] == pytest.approx([0.17961, 0.35922, 0.11101], abs=1e-5)
    assert OMEGA4 * VERTEX_DENSITY == pytest.approx(2 * math.sqrt(5) * A_R)
    # the closed forms satisfy all three relations exactly and tile the plane
    res = equation_residuals(*(TILE_DENSITY[k] for k in "RPH"))
    assert max(abs(r) for r in res.values()) < 1e-12
    assert sum(TILE_DENSITY[k] * AREA[k] for k in "RPH") == pytest.approx(1.0)


def test_single_tile():
    counts, ratios = tile_frequencies(seed_tiling("R"))
    assert counts == {"R": 1, "P": 0, "H": 0}
    assert ratios["R"] == 1.0


def test_no_rhombus_is_degenerate():
    pent = np.cumsum(np.vstack([np.zeros((1, 4), dtype=np.int64), DIRECTIONS[[0, 2, 4, 6]]]), axis=0)
    f = tile_frequencies(Tiling.from_points(pent))
    assert f.degenerate and math.isnan(f.ratios["P"])


@pytest.mark.parametrize("schedule", [ALL_L, ALL_R])
def test_frequencies_depth5(tiling, schedule):
    f = tile_frequencies(tiling("R", schedule, 5))
    assert not f.degenerate
    for k, want in zip("RPH", FREQUENCY):
        assert f.ratios[k] == pytest.approx(want, rel=0.05)


def test_clip_region(tiling):
    t = tiling("R", depth=3)
    full, inner = clip_region(t, 1.0), clip_region(t, 0.8)
    assert inner.area == pytest.approx(0.64 * full.area)
    assert inner.contains(inner.hull.mean(axis=0)).all()
    with pytest.raises(ValueError):
        clip_region(t, 0.0)


def test_density_depth5(tiling):
    rep = density_report(tiling("R", depth=5))
    assert rep.v == pytest.approx(0.94046, rel=0.01)
    assert rep.n_R == pytest.approx(0.17961, rel=0.02)
    assert rep.n_P == pytest.approx(0.35922, rel=0.02)
    assert rep.n_H == pytest.approx(0.11101, rel=0.02)
    assert rep.area_closure == pytest.approx(1.0, rel=0.01)
    assert rep.n_R + 1.5 * rep.n_P + 2 * rep.n_H == pytest.approx(0.94046, rel=0.01)
    assert rep.w == pytest.approx(2.6287, rel=0.01)
    assert set(rep.to_dict()) >= {"n_R", "n_P", "n_H", "v", "patch_area", "a", "w", "Omega4"}


def test_report_rejects_negative_values():
    with pytest.raises(ValueError):
        DensityReport(-0.1, 0.3, 0.1, 0.9, 10.0)
    with pytest.raises(ValueError):
        DensityReport(0.1, 0.3, 0.1, 0.9, 0.0)


def test_substitution_matrix():
    patches = history("cluster", ALL_L, 5)[2:]
    sm = substitution_matrix_estimate(patches)
    assert (sm.matrix >= 0).all()
    assert sm.eigenvalue == pytest.approx(TAU**4, rel=0.03)
    assert sm.eigenvector == pytest.approx(np.array(FREQUENCY), rel=0.05)
    with pytest.raises(ValueError):
        substitution_matrix_estimate(patches[:1])
