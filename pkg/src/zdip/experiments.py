"""
Scripted synthetic experiments behind the command line tools.

Each function is deterministic given its seed and returns plain rows
(lists of dicts) ready to be written as CSV, or small result objects.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy import stats

from . import rng
from .dip import _dip_sorted, canonicalize
from .null import NullTable, _null_dips, get_summary, load_default_table
from .synth import preset, sample_mixture
from .ztest import DEFAULT_THRESHOLD, DownsampleConfig, downsampled_zdip, p_value_from_null, zdip, zscore

__all__ = [
    "SYNTHETIC_GRID",
    "log_spaced_sizes",
    "validate_synthetic",
    "null_ensemble",
    "large_sample_contrast",
    "stability",
    "ScalingFit",
    "fit_power_law",
    "scaling",
]

# (row label, preset, sample sizes), in the order of the published table
SYNTHETIC_GRID = (
    ("Unimodal", "unimodal", (50, 100, 200, 400, 500)),
    ("Weak bimodal", "weak_bimodal", (50, 100, 200, 300, 400, 500)),
    ("Strong bimodal", "strong_bimodal", (50, 100, 200, 300, 400, 500)),
    ("Trimodal", "trimodal", (50, 100, 200, 300, 400, 500)),
)

STABILITY_DISTRIBUTIONS = ("strong_bimodal", "negligible_mode", "uniform")


def _table(table):
    return load_default_table() if table is None else table


def log_spaced_sizes(lo: int, hi: int, count: int) -> np.ndarray:
    """About `count` distinct integers spaced evenly on a log scale from `lo` to `hi`."""
    return np.unique(np.round(np.geomspace(lo, hi, count)).astype(np.int64))


def _uniform_sample(n, seed):
    return canonicalize(rng.substream(seed, rng.MIXTURE).random(n))


def _draw(distribution, n, seed):
    if distribution == "uniform":
        return _uniform_sample(n, seed)
    return sample_mixture(preset(distribution), n, seed)


def validate_synthetic(
    table: NullTable | None = None,
    replications: int = 1000,
    seed: int = 0,
    p_replicates: int = 9999,
    threshold: float = DEFAULT_THRESHOLD,
    alpha: float = 0.05,
    grid=SYNTHETIC_GRID,
) -> list[dict]:
    """
    Mixture presets scored by both decision rules.

    For every (preset, N) cell: mean Z-Dip over `replications` samples,
    the fraction with Monte Carlo dip p-value below `alpha`, the fraction
    with ``z > threshold``, and how often the two decisions agree. All
    samples of one size share a single null reference of `p_replicates`
    uniform dips.
    """
    table = _table(table)
    sizes = sorted({n for _, _, ns in grid for n in ns})
    reference = {n: _null_dips(n, p_replicates, rng.derive_seed(seed, rng.EXPERIMENT, 0, n)) for n in sizes}
    rows = []
    for c, (label, name, ns) in enumerate(grid):
        spec = preset(name)
        for n in ns:
            summary = get_summary(table, n)
            cell = np.random.SeedSequence(seed, spawn_key=(rng.EXPERIMENT, 1, c, n))
            seeds = cell.generate_state(replications, np.uint64)
            dips = np.array([_dip_sorted(sample_mixture(spec, n, int(s)).values)[0] for s in seeds])
            z = zscore(dips, summary.mu, summary.sigma)
            p = p_value_from_null(dips, reference[n])
            by_p = p < alpha
            by_z = z > threshold
            rows.append(
                {
                    "configuration": label,
                    "preset": name,
                    "n": n,
                    "mean_z": float(z.mean()),
                    "frac_p_below_alpha": float(by_p.mean()),
                    "frac_z_above_threshold": float(by_z.mean()),
                    "agreement": float((by_p == by_z).mean()),
                    "replications": replications,
                }
            )
    return rows


def null_ensemble(
    ns: Sequence[int],
    size: int,
    seed: int,
    table: NullTable | None = None,
    p_replicates: int = 9999,
) -> dict[str, np.ndarray]:
    """
    Dip, Z-Dip and Monte Carlo p-value for `size` uniform samples per N.

    The p-values use a separate null reference per N, so they are not
    computed from the samples they score.
    """
    table = _table(table)
    cols = {"n": [], "dip": [], "z": [], "p_value": []}
    for n in ns:
        s = get_summary(table, n)
        dips = _null_dips(int(n), int(size), rng.derive_seed(seed, rng.EXPERIMENT, 2, n))
        ref = _null_dips(int(n), int(p_replicates), rng.derive_seed(seed, rng.EXPERIMENT, 3, n))
        cols["n"].append(np.full(dips.size, n))
        cols["dip"].append(dips)
        cols["z"].append(zscore(dips, s.mu, s.sigma))
        cols["p_value"].append(p_value_from_null(dips, ref))
    return {k: np.concatenate(v) for k, v in cols.items()}


def large_sample_contrast(
    table: NullTable | None = None,
    seed: int = 0,
    sizes: Sequence[int] = (1000, 100_000),
    distribution: str = "negligible_mode",
    config: DownsampleConfig | None = None,
    p_replicates: int = 0,
    threshold: float = DEFAULT_THRESHOLD,
) -> list[dict]:
    """
    Plain versus downsampled Z-Dip on one generator at several sizes.

    ``p_replicates > 0`` also attaches a Monte Carlo dip p-value to the
    plain report (costly at large N).
    """
    table = _table(table)
    out = []
    for i, n in enumerate(sizes):
        sample = _draw(distribution, n, rng.derive_seed(seed, rng.EXPERIMENT, 4, i))
        plain = zdip(sample, table, threshold)
        if p_replicates:
            ref = _null_dips(int(n), int(p_replicates), rng.derive_seed(seed, rng.EXPERIMENT, 5, n))
            plain = replace(plain, p_value=float(p_value_from_null(plain.dip, ref)))
        cfg = config or DownsampleConfig(seed=rng.derive_seed(seed, rng.EXPERIMENT, 6, i))
        down = downsampled_zdip(sample, table, cfg, threshold)
        out.append({"distribution": distribution, "n": n, "plain": plain, "downsampled": down})
    return out


def stability(
    table: NullTable | None = None,
    ns: Sequence[int] | None = None,
    seed: int = 0,
    subsample_size: int = 100,
    iterations: int = 30,
    distributions: Sequence[str] = STABILITY_DISTRIBUTIONS,
    threshold: float = DEFAULT_THRESHOLD,
) -> list[dict]:
    """Mean downsampled Z-Dip for one fresh sample per (distribution, N)."""
    table = _table(table)
    ns = log_spaced_sizes(150, 72_000, 132) if ns is None else ns
    rows = []
    for d, name in enumerate(distributions):
        for n in ns:
            n = int(n)
            sample = _draw(name, n, rng.derive_seed(seed, rng.EXPERIMENT, 7, d, n))
            cfg = DownsampleConfig(subsample_size, iterations, rng.derive_seed(seed, rng.EXPERIMENT, 8, d, n))
            rep = downsampled_zdip(sample, table, cfg, threshold)
            rows.append({"distribution": name, "n": n, "mean_z": rep.z, "iterations": rep.iterations})
    return rows


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of log(mean z) on log N."""

    alpha: float
    intercept: float
    r_squared: float
    alpha_stderr: float
    ok: bool = True
    reason: str = ""


def fit_power_law(ns, mean_z) -> ScalingFit:
    """
    Fit ``mean_z ~ N**alpha`` on the log-log scale.

    Returns a fit flagged ``ok=False`` (with NaN coefficients) when some
    mean is not positive, since its logarithm is undefined.
    """
    ns = np.asarray(ns, dtype=np.float64)
    mean_z = np.asarray(mean_z, dtype=np.float64)
    if ns.size < 3:
        return ScalingFit(math.nan, math.nan, math.nan, math.nan, False, "need at least 3 sizes")
    if np.any(mean_z <= 0):
        return ScalingFit(math.nan, math.nan, math.nan, math.nan, False, "mean z not positive at every N")
    res = stats.linregress(np.log(ns), np.log(mean_z))
    return ScalingFit(float(res.slope), float(res.intercept), float(res.rvalue**2), float(res.stderr))


def scaling(
    table: NullTable | None = None,
    preset_name: str = "strong_bimodal",
    ns: Sequence[int] = (100, 200, 500, 1000, 2000, 5000, 10_000),
    replications: int = 100,
    seed: int = 0,
) -> tuple[list[dict], ScalingFit]:
    """Mean Z-Dip per N for one preset, and its power-law fit."""
    table = _table(table)
    spec = preset(preset_name)
    rows = []
    for n in ns:
        n = int(n)
        s = get_summary(table, n)
        seeds = np.random.SeedSequence(seed, spawn_key=(rng.EXPERIMENT, 9, n)).generate_state(replications, np.uint64)
        dips = np.array([_dip_sorted(sample_mixture(spec, n, int(x)).values)[0] for x in seeds])
        z = zscore(dips, s.mu, s.sigma)
        rows.append({"preset": preset_name, "n": n, "mean_z": float(z.mean()), "sd_z": float(z.std(ddof=1)), "replications": replications})
    fit = fit_power_law([r["n"] for r in rows], [r["mean_z"] for r in rows])
    return rows, fit
