# %% [markdown]
# # Filled square vs its perimeter
#
# A filled `sqrt(k) x sqrt(k)` square of marked cells and just its boundary
# ring give nearly the same walk. Only the `c(k) = 4(k - 3 sqrt(k) + 2)`
# basis states inside the ring can differ. The checker runs both walks in
# lockstep and checks the equalities and bounds at every step.

# %%
from akrwalk import GridGeometry, compare_filled_vs_perimeter

for k in (4, 9, 16, 25):
    report = compare_filled_vs_perimeter(GridGeometry(32), k, horizon=300)
    info = report.info
    print(
        f"k={k:2d} c(k)={info['c_k']:3d} pass={report.passed}  "
        f"min<psi|phi>={info['min_mutual_overlap']:.6f} (bound {info['overlap_bound_value']:.6f})  "
        f"t_peak {info['t_peak_filled']}/{info['t_peak_perimeter']}  "
        f"p_peak {info['p_peak_filled']:.4f}/{info['p_peak_perimeter']:.4f}"
    )

# %% [markdown]
# The overlap bound is tight. The inner parts of the two states can become
# exactly anti-aligned, so `<psi|phi>` touches `1 - 2c(k)/4N`.
#
# The peak-step claim is asymptotic (`k = o(N)`). On this small grid, k=25
# gives peaks two steps apart. The report shows that as a failed claim
# rather than hiding it.

# %%
print(compare_filled_vs_perimeter(GridGeometry(16), 9, horizon=500).to_text())
