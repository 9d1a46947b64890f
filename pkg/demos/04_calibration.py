"""
Where the 1.975 cutoff comes from
=================================

At each N, take the z value exceeded by 5% of uniform-null samples and
bootstrap a 95% interval around it. The universal cutoff is the largest
upper bound rounded up to a multiple of 0.005.

Ensembles here are small so the script runs in seconds; expect the
estimates to wobble. The CLI's ``calibrate`` command uses 9,999.
"""

import zdip
from zdip.calibration import type_one_rate

estimates = [zdip.calibrate_threshold(n, ensemble_size=2000, bootstrap_rounds=300, seed=n) for n in (50, 200, 1000)]
for e in estimates:
    print(f"N={e.n:>5}: z_at_p05={e.z_at_p05:.3f}  95% CI [{e.ci_low:.3f}, {e.ci_high:.3f}]")
print("cutoff from these estimates:", zdip.universal_cutoff(estimates))

for n in (50, 1000):
    rate, se = type_one_rate(n, zdip.DEFAULT_THRESHOLD, 4000, seed=99)
    print(f"Type I rate at z > {zdip.DEFAULT_THRESHOLD} for N={n}: {rate:.3f} (+/- {se:.3f})")
