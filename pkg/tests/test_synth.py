import numpy as np
import pytest
from scipy import stats

from zdip import PRESETS, InvalidMixture, MixtureSpec, UnknownPreset, draw_mixture, mixture_moments, preset, sample_mixture


def test_presets_present():
    assert set(PRESETS) == {"unimodal", "weak_bimodal", "strong_bimodal", "trimodal", "negligible_mode"}
    for spec in PRESETS.values():
        assert sum(spec.weights) == pytest.approx(1.0, abs=1e-12)


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        preset("quadmodal")


@pytest.mark.parametrize(
    "args",
    [
        ((0.0,), (1.0, 1.0), (1.0,)),
        ((0.0,), (0.0,), (1.0,)),
        ((0.0, 1.0), (1.0, 1.0), (1.2, -0.2)),
        ((0.0, 1.0), (1.0, 1.0), (0.5, 0.4)),
        ((), (), ()),
    ],
)
def test_invalid_mixtures(args):
    with pytest.raises(InvalidMixture):
        MixtureSpec(*args)


def test_sampling_is_seeded_and_sorted():
    a = sample_mixture(preset("trimodal"), 200, 5)
    assert a == sample_mixture(preset("trimodal"), 200, 5)
    assert np.all(np.diff(a.values) >= 0)
    assert a != sample_mixture(preset("trimodal"), 200, 6)


def test_moments_match_large_sample():
    spec = preset("weak_bimodal")
    mean, var = mixture_moments(spec)
    x, _ = draw_mixture(spec, 200_000, 3)
    assert x.mean() == pytest.approx(mean, abs=4 * np.sqrt(var / x.size))
    assert x.var() == pytest.approx(var, rel=0.02)


def test_component_frequencies_chi_square():
    spec = preset("trimodal")
    _, labels = draw_mixture(spec, 30_000, 9)
    observed = np.bincount(labels, minlength=spec.k)
    expected = np.asarray(spec.weights) * labels.size
    assert stats.chisquare(observed, expected).pvalue > 0.001


def test_zero_weight_component_never_drawn():
    _, labels = draw_mixture(preset("unimodal"), 5000, 1)
    assert np.all(labels == 0)


def test_unimodal_preset_is_normal():
    x, _ = draw_mixture(preset("unimodal"), 5000, 2)
    assert stats.kstest(x, "norm", args=(-0.3, 0.1)).pvalue > 0.001
