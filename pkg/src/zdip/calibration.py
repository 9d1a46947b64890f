"""
Empirical calibration of the Z-Dip decision threshold.

At each sample size the threshold is the z value exceeded by 5% of
uniform-null samples. By the monotone link between z and the dip p-value,
this is also the z at which the Monte Carlo p-value crosses 0.05. The
universal cutoff takes the largest bootstrap upper bound over sample sizes
and rounds it up to a multiple of 0.005.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import rng
from .errors import EmptyInput, InsufficientEnsemble, InvalidGridPoint
from .null import MIN_N, NullTable, _null_dips, get_summary, load_default_table
from .ztest import zscore

__all__ = ["ThresholdEstimate", "quantile", "calibrate_threshold", "universal_cutoff", "null_z", "type_one_rate"]

PUBLICATION_ENSEMBLE = 1000


@dataclass(frozen=True)
class ThresholdEstimate:
    n: int
    z_at_p05: float
    ci_low: float
    ci_high: float
    ensemble_size: int
    bootstrap_rounds: int
    seed: int | None = None
    alpha: float = 0.05
    level: float = 0.95

    @property
    def publication_grade(self) -> bool:
        return self.ensemble_size >= PUBLICATION_ENSEMBLE

    def as_row(self) -> dict:
        return {
            "n": self.n,
            "z_at_p05": self.z_at_p05,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "ensemble_size": self.ensemble_size,
            "bootstrap_rounds": self.bootstrap_rounds,
            "seed": self.seed,
        }


def quantile(values, q):
    """Linear interpolation between order statistics (Hyndman-Fan type 7)."""
    return np.quantile(np.asarray(values, dtype=np.float64), q, method="linear")


def null_z(n: int, ensemble_size: int, seed: int, table: NullTable | None = None) -> np.ndarray:
    """Z-Dip of `ensemble_size` fresh uniform samples of size `n`."""
    table = load_default_table() if table is None else table
    s = get_summary(table, n)
    return zscore(_null_dips(int(n), int(ensemble_size), seed), s.mu, s.sigma)


def calibrate_threshold(
    n: int,
    ensemble_size: int = 9999,
    bootstrap_rounds: int = 1000,
    seed: int = 0,
    table: NullTable | None = None,
    alpha: float = 0.05,
    level: float = 0.95,
) -> ThresholdEstimate:
    """
    Z-Dip value matching a dip-test p-value of `alpha` at sample size `n`.

    The point estimate is the type-7 ``1 - alpha`` quantile of null z.
    The confidence interval is the percentile bootstrap over the z ensemble,
    round r drawn from its own substream. If the point estimate falls
    outside the percentile interval (possible for skewed bootstrap
    distributions), the interval is widened to include it.

    Raises
    ------
    InvalidGridPoint
        `n` < 4.
    InsufficientEnsemble
        fewer than 100 null samples or bootstrap rounds.
    """
    n = int(n)
    if n < MIN_N:
        raise InvalidGridPoint(f"calibration needs n >= {MIN_N}, got {n}")
    if ensemble_size < 100:
        raise InsufficientEnsemble(f"ensemble_size must be >= 100, got {ensemble_size}")
    if bootstrap_rounds < 100:
        raise InsufficientEnsemble(f"bootstrap_rounds must be >= 100, got {bootstrap_rounds}")

    z = null_z(n, ensemble_size, seed, table)
    q = 1.0 - alpha
    est = float(quantile(z, q))
    boot = np.empty(bootstrap_rounds)
    for r in range(bootstrap_rounds):
        g = rng.substream(seed, rng.BOOTSTRAP, n, r)
        boot[r] = quantile(z[g.integers(0, z.size, size=z.size)], q)
    tail = (1.0 - level) / 2.0
    lo, hi = (float(v) for v in quantile(boot, [tail, 1.0 - tail]))
    return ThresholdEstimate(
        n=n,
        z_at_p05=est,
        ci_low=min(lo, est),
        ci_high=max(hi, est),
        ensemble_size=int(ensemble_size),
        bootstrap_rounds=int(bootstrap_rounds),
        seed=seed,
        alpha=alpha,
        level=level,
    )


def universal_cutoff(estimates: Sequence[ThresholdEstimate], step: float = 0.005) -> float:
    """
    Largest ``ci_high`` rounded up to a multiple of `step`.

    Rejecting at this cutoff keeps the Type I rate at or below the nominal
    level at every calibrated sample size, up to bootstrap uncertainty.
    """
    if not estimates:
        raise EmptyInput("need at least one threshold estimate")
    top = max(e.ci_high for e in estimates)
    # round() absorbs representation error such as 1.975/0.005 = 394.99999...
    k = math.ceil(round(top / step, 9))
    return round(k * step, 10)


def type_one_rate(n: int, cutoff: float, ensemble_size: int, seed: int, table: NullTable | None = None, alpha=0.05):
    """
    Fraction of fresh null samples with ``z > cutoff``.

    Returned with the binomial standard error of a rate equal to `alpha`
    over `ensemble_size` trials.
    """
    z = null_z(n, ensemble_size, seed, table)
    return float(np.mean(z > cutoff)), math.sqrt(alpha * (1 - alpha) / z.size)
