"""
Splitting a deuteron beam
=========================

Two models for the spin-1 split, and how many atoms it takes to tell them apart.
"""

from spincouple import experiments

for model in ("independent", "conventional"):
    print(model, {k: str(v) for k, v in experiments.deuteron_exact(model).items()})

# %%
report = experiments.deuteron_simulate("independent", 10**6, seed=42)
print(report.counts)
print({k: round(v, 6) for k, v in report.frequencies.items()})
print("p-values:", report.p_values)

# %%
# Power of the chi-square test, simulated and from the noncentral chi-square.
for n in (100, 300, 1000, 10**4):
    p = experiments.discrimination_power(n, 0.001, trials=1000)
    print(f"N={n:6d}  reject conventional {p.reject_conventional:.3f} "
          f"(analytic {p.noncentral_conventional:.3f})  "
          f"reject independent {p.reject_independent:.3f}")

# %%
# Filling energy levels pairwise.
print(experiments.fermi_ground_energy([1, 2, 3], 4))
