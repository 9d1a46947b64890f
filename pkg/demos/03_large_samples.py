"""
Very large samples and downsampling
===================================

With 100,000 points even a 2.5% side bump is detected. Averaging z over
30 random subsets of 100 points asks instead whether the bump would be
visible at a moderate sample size.
"""

import zdip
from zdip.experiments import large_sample_contrast

for row in large_sample_contrast(seed=7):
    plain, down = row["plain"], row["downsampled"]
    note = " (table clamped)" if plain.extrapolated else ""
    print(f"N={row['n']:>6}: plain z={plain.z:6.2f}{note}   downsampled z={down.z:6.2f}")

# the same call on your own data
x = zdip.sample_mixture(zdip.preset("negligible_mode"), 50_000, seed=11)
cfg = zdip.DownsampleConfig(subsample_size=100, iterations=30, seed=5)
r = zdip.downsampled_zdip(x, config=cfg)
print(f"\nN=50000 downsampled: z={r.z:.2f}, spread of per-subset z {min(r.per_iteration_z):.2f}..{max(r.per_iteration_z):.2f}")
