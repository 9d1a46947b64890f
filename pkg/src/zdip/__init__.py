"""
Standardized Hartigan dip test (Z-Dip) for multimodality.

>>> import numpy as np, zdip
>>> x = np.random.default_rng(1).normal(size=500)
>>> zdip.zdip(x).is_multimodal
False
"""
__version__ = "0.1.0"

from .calibration import ThresholdEstimate, calibrate_threshold, type_one_rate, universal_cutoff
from .dip import DipResult, Sample, canonicalize, dip, dip_batch
from .errors import *  # noqa: F401,F403
from .null import (
    NullSummary,
    NullTable,
    generate_table,
    get_summary,
    load_default_table,
    load_table,
    save_table,
    simulate_null_dips,
)
from .synth import PRESETS, MixtureSpec, draw_mixture, mixture_moments, preset, sample_mixture
from .ztest import (
    DEFAULT_THRESHOLD,
    DownsampleConfig,
    ZDipReport,
    dip_p_value,
    downsampled_zdip,
    p_value_from_null,
    zdip,
)
