# %% [markdown]
# # Simpleton flips
#
# Where one R, one P and one H meet at a vertex, the vertex can hop a short
# distance (1/tau) and the three tiles re-form.  In perpendicular space the
# same vertex jumps by tau, so repeated flips smear the window.

# %%
import numpy as np

from rphtiling.flips import apply_flip, find_flips, monte_carlo_flips
from rphtiling.gpsp import Schedule, run_sequence, seed_tiling

t, _ = run_sequence(seed_tiling("R"), Schedule.parse("LLLLLLLLLL"), 4)
moves = find_flips(t)
print(len(moves), "flips available")
m = moves[0]
print(m, m.par_length_exact(), m.perp_length_exact())
print(apply_flip(apply_flip(t, m), m.reversed()) == t)

# %%
final, trace = monte_carlo_flips(t, 3000, seed=1)
print(final.counts() == t.counts(), all(ok and same for _, ok, same in trace.checks))
rms = np.array(trace.rms_perp)
print("RMS perpendicular radius every 500 steps:", rms[::500].round(4))
