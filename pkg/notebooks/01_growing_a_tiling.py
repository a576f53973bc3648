# %% [markdown]
# # Growing an RPH tiling
#
# A tiling here is nothing but a finite set of points of the decagonal module,
# stored as four integers each.  Edges join points one unit apart and the
# faces fall out of the planar graph.  One substitution step scales every
# vertex by tau**2, drops a small decagonal motif on each, then deletes one
# point at every acute corner of every rhombus.

# %%
from pathlib import Path

from rphtiling.files import tiling_svg
from rphtiling.gpsp import Schedule, WheelDiagram, gpsp_step_detailed, run_sequence, seed_tiling
from rphtiling.tiling import validate

OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

# %% [markdown]
# The default seed is a single thin rhombus with its sharp corner at the origin.

# %%
t = seed_tiling("R")
print(t)
print(t.vertices)

# %% [markdown]
# One step with the all-L wheel.  The record shows how many candidates the
# motif produced and how many the elimination removed (two per rhombus corner
# pair, here exactly two).

# %%
wheel = WheelDiagram.uniform("L")
t1, rec, elim = gpsp_step_detailed(t, wheel)
print(rec)
print("removed:", elim.removed.tolist())

# %%
t5, prov = run_sequence(seed_tiling("R"), Schedule.parse("LLLLLLLLLL"), depth=5)
for step in prov.steps:
    print(step.iteration, step.vertices, step.counts)
print(validate(t5).ok)

# %% [markdown]
# Vertex counts grow by roughly tau**4 = 6.85 per step, so depth 5 already
# has about eleven thousand vertices.  Mixing wheels changes the tiling;
# mixing in a random entry makes the master seed matter.

# %%
mixed, _ = run_sequence(seed_tiling("R"), Schedule.parse("LLLLLLLLLL RANDOM(1,1,1,1)"), 4, master_seed=99)
print(mixed, validate(mixed).ok)

# %%
(OUT / "depth3.svg").write_text(tiling_svg(run_sequence(seed_tiling("R"), Schedule.parse("L" * 10), 3)[0]))
print("wrote", OUT / "depth3.svg")
