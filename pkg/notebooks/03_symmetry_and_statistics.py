# %% [markdown]
# # Point groups and tile statistics

# %%
from collections import Counter

from rphtiling.gpsp import Schedule, WheelDiagram, run_sequence, seed_tiling
from rphtiling.stats import density_report, substitution_matrix_estimate, tile_frequencies
from rphtiling.symmetry import classification_table, classify_wheel, empirical_symmetry, sequence_group
from rphtiling.window import perp_cloud

# %% [markdown]
# Each of the 1024 wheels has a stabilizer in D10.  Five rotations alone
# never occur for a single wheel.

# %%
table = classification_table()
print(Counter(table.values()))
print(classify_wheel(WheelDiagram.parse("LRLRLRLRLR")))

# %% [markdown]
# Alternating two wheels keeps only their common symmetries, and C5 appears.

# %%
print(sequence_group([WheelDiagram.uniform("L"), WheelDiagram.parse("LRLRLRLRLR")]))

# %%
t4, _ = run_sequence(seed_tiling("cluster"), Schedule.parse("LLLLLLLLLL"), 4)
print("all-L cloud:", empirical_symmetry(perp_cloud(t4)))
cyc, _ = run_sequence(seed_tiling("cluster"), Schedule.parse("LLRLRRLRLL LRRLLLRLRR RLLRLRRRLL LLLRRLRLRR"), 4)
print("four-cycle cloud:", empirical_symmetry(perp_cloud(cyc)))

# %% [markdown]
# Frequencies and densities inside the central 80% of the patch.

# %%
t5, _, hist = run_sequence(seed_tiling("R"), Schedule.parse("LLLLLLLLLL"), 5, keep_history=True)
counts, ratios = tile_frequencies(t5)
print(counts, {k: round(v, 4) for k, v in ratios.items()})
rep = density_report(t5)
print({k: round(v, 5) for k, v in rep.to_dict().items() if isinstance(v, float)})
print(rep.residuals)

# %% [markdown]
# The substitution matrix counts child tiles inside each inflated parent.  The
# single-rhombus patches are lopsided at low depth, so the cluster seed is used.

# %%
_, _, chist = run_sequence(seed_tiling("cluster"), Schedule.parse("LLLLLLLLLL"), 5, keep_history=True)
sm = substitution_matrix_estimate(chist[2:])
print(sm.matrix.round(3))
print("Perron value", round(sm.eigenvalue, 4), "vector", sm.eigenvector.round(4))
