# %% [markdown]
# # Adjacent marked locations
#
# Two marked neighbours pass the amplitudes that point at each other back
# and forth. Each step negates them (query), leaves them alone (identity
# coin at marked cells) and swaps them (shift). They therefore stay at
# `(-1)^t / sqrt(4N)` forever.

# %%
import math

from akrwalk import GridGeometry, MarkedSet, evolve, verify_all_adjacent_pairs
from akrwalk.verify import mutual_pairs

g = GridGeometry(8)
m = MarkedSet([(2, 2), (3, 2)])
c = 1 / math.sqrt(g.dim)
i, j = mutual_pairs(g, m)[0]
for t, amps in evolve(g, m, 6):
    print(t, amps[i] / c, amps[j] / c)

# %% [markdown]
# The same holds for every touching pair in a block, which is why the
# inside of a marked square barely moves.

# %%
from akrwalk import PlacementSpec, generate

g = GridGeometry(16)
block = generate(PlacementSpec("block", 16, (5, 5)), g)
report = verify_all_adjacent_pairs(g, block, horizon=1000)
print(report.summary())
