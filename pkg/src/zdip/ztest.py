"""
Standardized dip (Z-Dip) and its decision rule.

``z = (dip - mu_N) / sigma_N`` where ``mu_N`` and ``sigma_N`` summarize
the dip of N uniform draws. A sample is called multimodal when ``z``
exceeds the universal cutoff (1.975 by default).

For very large samples the downsampled variant averages ``z`` over random
subsets of a moderate size, which keeps negligible secondary bumps from
being flagged just because N is huge.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import rng
from .dip import _dip_sorted, canonicalize
from .errors import InvalidConfig, InvalidReplicates, SampleTooSmall
from .null import MIN_N, NullTable, _null_dips, get_summary, load_default_table

__all__ = [
    "DEFAULT_THRESHOLD",
    "ZDipReport",
    "DownsampleConfig",
    "zdip",
    "zscore",
    "dip_p_value",
    "p_value_from_null",
    "downsampled_zdip",
]

DEFAULT_THRESHOLD = 1.975


@dataclass(frozen=True)
class ZDipReport:
    """
    Outcome of a Z-Dip evaluation.

    For a downsampled report ``dip`` is the mean subsample dip, ``mu`` and
    ``sigma`` refer to the subsample size, and ``z`` is the mean of
    ``per_iteration_z``.
    """

    n: int
    dip: float
    mu: float
    sigma: float
    z: float
    threshold: float
    is_multimodal: bool
    extrapolated: bool = False
    p_value: float | None = None
    iterations: int = 1
    per_iteration_z: tuple = field(default=())
    subsample_size: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_iteration_z"] = list(self.per_iteration_z)
        return d


@dataclass(frozen=True)
class DownsampleConfig:
    subsample_size: int = 100
    iterations: int = 30
    seed: int = 0

    def __post_init__(self):
        if int(self.subsample_size) < MIN_N:
            raise InvalidConfig(f"subsample_size must be >= {MIN_N}, got {self.subsample_size}")
        if int(self.iterations) < 1:
            raise InvalidConfig(f"iterations must be >= 1, got {self.iterations}")


def zscore(dip_value, mu, sigma):
    return (dip_value - mu) / sigma


def _table(table):
    return load_default_table() if table is None else table


def zdip(sample, table: NullTable | None = None, threshold: float = DEFAULT_THRESHOLD) -> ZDipReport:
    """
    Z-Dip of a sample against the null table.

    Parameters
    ----------
    sample : Sample or array_like
    table : NullTable, optional
        Defaults to :func:`zdip.null.load_default_table`.
    threshold : float
        Decision cutoff; ``is_multimodal`` is ``z > threshold``.

    Raises
    ------
    SampleTooSmall
        fewer than 4 observations (the null table starts at N = 4).
    """
    sample = canonicalize(sample)
    if sample.n < MIN_N:
        raise SampleTooSmall(sample.n, MIN_N)
    summary = get_summary(_table(table), sample.n)
    d = float(_dip_sorted(sample.values)[0])
    z = zscore(d, summary.mu, summary.sigma)
    return ZDipReport(
        n=sample.n,
        dip=d,
        mu=summary.mu,
        sigma=summary.sigma,
        z=z,
        threshold=float(threshold),
        is_multimodal=bool(z > threshold),
        extrapolated=summary.extrapolated,
        per_iteration_z=(z,),
    )


def p_value_from_null(dip_obs, null_dips) -> np.ndarray | float:
    """
    Add-one Monte Carlo p-value ``(1 + #{null >= dip_obs}) / (R + 1)``.

    Null dips within 1e-12 (relative) of the observed dip count as ties,
    so equal dips computed from different data are not split by rounding.
    `dip_obs` may be an array; the result then has the same shape.
    """
    null = np.sort(np.asarray(null_dips, dtype=np.float64))
    obs = np.asarray(dip_obs, dtype=np.float64)
    below = np.searchsorted(null, obs * (1.0 - 1e-12), side="left")
    p = (1.0 + (null.size - below)) / (null.size + 1.0)
    return float(p) if p.ndim == 0 else p


def dip_p_value(sample, replicates: int = 9999, seed: int = 0) -> float:
    """
    One-sided Monte Carlo p-value of the dip under uniform sampling.

    Large dips give small p. Never exactly zero: the smallest attainable
    value is ``1 / (replicates + 1)``.
    """
    sample = canonicalize(sample)
    if sample.n < MIN_N:
        raise SampleTooSmall(sample.n, MIN_N)
    if int(replicates) < 1:
        raise InvalidReplicates(f"need at least 1 replicate, got {replicates}")
    d = _dip_sorted(sample.values)[0]
    return p_value_from_null(d, _null_dips(sample.n, int(replicates), seed))


def downsampled_zdip(
    sample,
    table: NullTable | None = None,
    config: DownsampleConfig | None = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> ZDipReport:
    """
    Mean Z-Dip over random subsets drawn without replacement.

    Samples no larger than ``config.subsample_size`` fall back to
    :func:`zdip` (reported with ``iterations=1``). Subset i comes from the
    substream ``(config.seed, i)``, so the result does not depend on the
    order in which iterations are evaluated.
    """
    config = DownsampleConfig() if config is None else config
    sample = canonicalize(sample)
    if sample.n < MIN_N:
        raise SampleTooSmall(sample.n, MIN_N)
    table = _table(table)
    m = int(config.subsample_size)
    if sample.n <= m:
        return zdip(sample, table, threshold)

    summary = get_summary(table, m)
    dips = np.empty(config.iterations)
    for i in range(config.iterations):
        g = rng.substream(config.seed, rng.SUBSAMPLE, i)
        idx = g.choice(sample.n, size=m, replace=False)
        dips[i] = _dip_sorted(np.sort(sample.values[idx]))[0]
    zs = zscore(dips, summary.mu, summary.sigma)
    z = float(zs.mean())
    return ZDipReport(
        n=sample.n,
        dip=float(dips.mean()),
        mu=summary.mu,
        sigma=summary.sigma,
        z=z,
        threshold=float(threshold),
        is_multimodal=bool(z > threshold),
        extrapolated=summary.extrapolated,
        iterations=int(config.iterations),
        per_iteration_z=tuple(float(v) for v in zs),
        subsample_size=m,
    )
