# %% [markdown]
# # Single marked location
#
# Start from the uniform superposition over all `4N` basis states, apply
# query / coin / shift repeatedly, and watch the overlap with the start
# state fall while the probability of the marked cell grows.

# %%
import math

from akrwalk import GridGeometry, MarkedSet, default_horizon, run

# %%
for n in (8, 16, 32, 64):
    g = GridGeometry(n)
    r = run(g, MarkedSet([(n // 2, n // 2)]))
    s = r.stopping
    print(
        f"n={n:3d}  horizon={r.horizon:4d}  t_overlap_zero={s.t_overlap_zero:4d}  "
        f"t_peak={s.t_peak:4d}  p_peak={s.p_peak:.4f}  "
        f"sqrt(N ln N)={math.sqrt(g.N * math.log(g.N)):7.1f}  1/ln N={1 / math.log(g.N):.4f}"
    )

# %% [markdown]
# The peak probability shrinks roughly like `1/log N` and the stopping
# step grows roughly like `sqrt(N log N)`.
#
# The marked probability keeps oscillating after the first peak. Later
# maxima are revivals, so `t_peak` only looks inside the first search
# window. The earliest maximum over the whole horizon is kept as
# `t_peak_global`.

# %%
g = GridGeometry(16)
r = run(g, MarkedSet([(3, 5)]), horizon=3 * default_horizon(g))
print("window:", r.stopping.window, " t_peak:", r.stopping.t_peak,
      " t_peak_global:", r.stopping.t_peak_global)

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 3))
    ax.plot(r.overlap, label="<psi(t)|psi(0)>")
    ax.plot(r.p_marked, label="p_marked")
    ax.axvline(r.stopping.t_peak, ls=":", c="k")
    ax.set_xlabel("t")
    ax.legend()
    fig.savefig("single_marked_16x16.png", dpi=120, bbox_inches="tight")
    print("saved single_marked_16x16.png")
except ImportError:
    pass
