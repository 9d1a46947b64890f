"""
Finite Gaussian mixtures and the named test configurations.

An observation is drawn by picking component k with probability
``weights[k]`` and then a Normal(``means[k]``, ``stdevs[k]**2``) variate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .dip import Sample, canonicalize
from .errors import InvalidMixture, UnknownPreset

__all__ = ["MixtureSpec", "PRESETS", "preset", "sample_mixture", "draw_mixture", "mixture_moments", "SAMPLING_METHOD"]

SAMPLING_METHOD = "component via Generator.choice, then Generator.normal (numpy ziggurat)"


@dataclass(frozen=True)
class MixtureSpec:
    means: tuple
    stdevs: tuple
    weights: tuple

    def __post_init__(self):
        means = tuple(float(m) for m in self.means)
        stdevs = tuple(float(s) for s in self.stdevs)
        weights = tuple(float(w) for w in self.weights)
        if not len(means) == len(stdevs) == len(weights) >= 1:
            raise InvalidMixture(
                f"means, stdevs and weights need one entry per component, got "
                f"{len(means)}, {len(stdevs)}, {len(weights)}"
            )
        if not all(np.isfinite(means)):
            raise InvalidMixture("component means must be finite")
        if not all(np.isfinite(s) and s > 0 for s in stdevs):
            raise InvalidMixture("component standard deviations must be positive")
        if not all(np.isfinite(w) and w >= 0 for w in weights):
            raise InvalidMixture("mixing weights must be non-negative")
        if abs(sum(weights) - 1.0) > 1e-12:
            raise InvalidMixture(f"mixing weights sum to {sum(weights)!r}, not 1")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stdevs", stdevs)
        object.__setattr__(self, "weights", weights)

    @property
    def k(self) -> int:
        return len(self.means)


PRESETS = {
    "unimodal": MixtureSpec((-0.3, -0.3), (0.1, 0.1), (1.0, 0.0)),
    "weak_bimodal": MixtureSpec((-0.6, 0.6), (0.15, 0.15), (0.7, 0.3)),
    "strong_bimodal": MixtureSpec((-0.6, 0.6), (0.1, 0.1), (0.5, 0.5)),
    "trimodal": MixtureSpec((-0.75, 0.0, 0.75), (0.1, 0.1, 0.1), (1 / 3, 1 / 3, 1 / 3)),
    # main mode plus a barely visible far one (used for the large-N experiments)
    "negligible_mode": MixtureSpec((-0.6, 0.6), (0.1, 0.2), (0.975, 0.025)),
}


def preset(name: str) -> MixtureSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def draw_mixture(spec: MixtureSpec, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Unsorted draws and their component labels."""
    n = int(n)
    if n < 1:
        raise InvalidMixture(f"need n >= 1 draws, got {n}")
    g = rng.substream(seed, rng.MIXTURE)
    labels = g.choice(spec.k, size=n, p=np.asarray(spec.weights))
    values = g.normal(np.asarray(spec.means)[labels], np.asarray(spec.stdevs)[labels])
    return values, labels


def sample_mixture(spec: MixtureSpec, n: int, seed: int) -> Sample:
    """`n` draws from the mixture, canonicalized (sorted)."""
    return canonicalize(draw_mixture(spec, n, seed)[0])


def mixture_moments(spec: MixtureSpec) -> tuple[float, float]:
    """Mean and variance of the mixture."""
    w = np.asarray(spec.weights)
    mu = np.asarray(spec.means)
    sd = np.asarray(spec.stdevs)
    mean = float(w @ mu)
    var = float(w @ (sd**2 + mu**2) - mean**2)
    return mean, var
