import math

import numpy as np
import pytest

from zdip import EmptyInput, InsufficientEnsemble, InvalidGridPoint, ThresholdEstimate, calibrate_threshold, universal_cutoff
from zdip.calibration import quantile, type_one_rate


def _est(hi):
    return ThresholdEstimate(100, hi - 0.05, hi - 0.1, hi, 9999, 1000)


def test_type7_quantile():
    assert quantile(np.arange(1, 101), 0.95) == pytest.approx(95.05)


@pytest.mark.parametrize(
    "highs, expected",
    [([1.971], 1.975), ([1.96, 1.97, 1.973], 1.975), ([2.012], 2.015), ([1.975], 1.975), ([1.97], 1.97)],
)
def test_cutoff_rounds_up(highs, expected):
    assert universal_cutoff([_est(h) for h in highs]) == expected


def test_cutoff_needs_estimates():
    with pytest.raises(EmptyInput):
        universal_cutoff([])


def test_calibration_deterministic(small_table):
    a = calibrate_threshold(50, 500, 200, seed=3, table=small_table)
    b = calibrate_threshold(50, 500, 200, seed=3, table=small_table)
    assert a == b
    assert a.ci_low <= a.z_at_p05 <= a.ci_high
    assert not math.isnan(a.ci_high)


def test_calibration_guards(small_table):
    with pytest.raises(InvalidGridPoint):
        calibrate_threshold(3, 500, 200, table=small_table)
    with pytest.raises(InsufficientEnsemble):
        calibrate_threshold(50, 50, 200, table=small_table)
    with pytest.raises(InsufficientEnsemble):
        calibrate_threshold(50, 500, 10, table=small_table)


def test_publication_flag():
    assert _est(2.0).publication_grade
    assert not ThresholdEstimate(50, 2, 1.9, 2.1, 500, 200).publication_grade


def test_csv_row_columns():
    assert list(_est(2.0).as_row()) == ["n", "z_at_p05", "ci_low", "ci_high", "ensemble_size", "bootstrap_rounds", "seed"]


def test_type_one_rate_bounds(small_table):
    rate, se = type_one_rate(50, 1.975, 2000, 1, small_table)
    assert 0 <= rate <= 1
    assert se == pytest.approx(math.sqrt(0.05 * 0.95 / 2000))
