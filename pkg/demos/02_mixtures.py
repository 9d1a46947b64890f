"""
Mixture presets and the decision rule
=====================================

Draw from the built-in Gaussian mixtures and compare the z > 1.975 rule
with the Monte Carlo p < 0.05 rule on the same samples.
"""

import numpy as np

import zdip
from zdip.experiments import validate_synthetic

for name, spec in zdip.PRESETS.items():
    mean, var = zdip.mixture_moments(spec)
    print(f"{name:<16} k={spec.k}  mean={mean:+.3f}  sd={np.sqrt(var):.3f}")

# a small version of the validation table (100 replications per cell)
rows = validate_synthetic(replications=100, seed=3, p_replicates=999)
print(f"\n{'configuration':<15}{'N':>5}{'mean z':>9}{'p<.05':>8}{'z>1.975':>9}{'agree':>7}")
for r in rows:
    print(
        f"{r['configuration']:<15}{r['n']:>5}{r['mean_z']:>9.2f}"
        f"{r['frac_p_below_alpha']:>8.2f}{r['frac_z_above_threshold']:>9.2f}{r['agreement']:>7.2f}"
    )
