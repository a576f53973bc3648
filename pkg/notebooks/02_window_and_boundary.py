# %% [markdown]
# # The window in perpendicular space
#
# Sending each vertex through the conjugate map gives a bounded cloud.  Its
# hull is the window: area 2*sqrt(5)*sin(36°) and a fractal edge.

# %%
from pathlib import Path

import numpy as np

from rphtiling.files import cloud_svg
from rphtiling.gpsp import Schedule, run_sequence, seed_tiling
from rphtiling.stats import WINDOW_AREA
from rphtiling.window import (ANALYTIC_DIMENSION, box_dimension, boundary_cells, boundary_sector, densify,
                              hausdorff, koch_sector, perp_cloud, window_area)

OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

# %% [markdown]
# The 14-point cluster seed fills the window evenly, so five steps are enough
# for a dense cloud.

# %%
t, _ = run_sequence(seed_tiling("cluster"), Schedule.parse("LLLLLLLLLL"), 5)
c = perp_cloud(t)
print(len(c), "points, radius", round(c.radius, 4))

# %%
for g in (0.01, 0.02, 0.05):
    print(f"grid {g}: area {window_area(c, g):.4f}  (closed form {WINDOW_AREA:.4f})")

# %% [markdown]
# Box counting on the raster boundary.  Depth 6 gives a cleaner edge; depth 5
# is shown to keep this quick.

# %%
fit = box_dimension(boundary_cells(c))
print(f"slope {fit.slope:.3f}, r2 {fit.r2:.4f}, expected {ANALYTIC_DIMENSION:.4f}")

# %% [markdown]
# A Koch-type arc, three pieces of ratio 1/tau**2 per generation, follows one
# tenth of the boundary.

# %%
k = koch_sector(5)
sector = boundary_sector(c, 0.0, 36.0, 0.01)
print("hausdorff to the empirical arc:", round(hausdorff(densify(k.points, 0.002), sector), 4))
print("Koch dimension by box counting:", round(koch_sector(6).fractal_fit().slope, 4))

# %%
sample = c.points[np.random.default_rng(0).choice(len(c), 20000, replace=False)]
(OUT / "window.svg").write_text(cloud_svg(sample))
print("wrote", OUT / "window.svg")
