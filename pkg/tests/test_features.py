import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaitforge.features import (
    IMF,
    count_extrema,
    count_zero_crossings,
    emd_decompose,
    envelope_mean,
    feature_vector,
    log_energy,
    quartile_stats,
    rms,
    shannon_entropy,
    zero_crossing_rate,
)


def reconstruction_error(signal, imfs, residue):
    total = residue.copy()
    for imf in imfs:
        total = total + imf.values
    return float(np.max(np.abs(signal - total)))


def assert_imf_invariants(imf):
    h = imf.values
    assert abs(count_extrema(h) - count_zero_crossings(h)) <= 1
    mid = envelope_mean(h)
    if mid is not None:
        amp = h.max() - h.min()
        assert abs(np.mean(mid)) <= 0.05 * amp


# ---------------------------------------------------------------------------
# EMD
# ---------------------------------------------------------------------------

def test_monotone_ramp_yields_no_imfs():
    ramp = np.linspace(0.0, 1.0, 64)
    imfs, residue = emd_decompose(ramp)
    assert imfs == []
    assert np.array_equal(residue, ramp)


def test_two_tone_separation():
    t = np.arange(2000) / 1000.0
    signal = np.sin(2 * np.pi * 10 * t) + np.sin(2 * np.pi * 1 * t)
    imfs, residue = emd_decompose(signal)
    assert len(imfs) >= 2
    fast = np.sin(2 * np.pi * 10 * t)
    corr = np.corrcoef(imfs[0].values, fast)[0, 1]
    assert corr > 0.95
    assert reconstruction_error(signal, imfs, residue) < 1e-9
    for imf in imfs:
        assert_imf_invariants(imf)


def test_reconstruction_on_random_smooth_signals():
    rng = np.random.default_rng(11)
    for _ in range(5):
        n = 500
        knots = rng.normal(size=12)
        slow = np.interp(np.linspace(0, 1, n), np.linspace(0, 1, 12), knots)
        signal = slow + 0.4 * np.sin(2 * np.pi * 9 * np.linspace(0, 1, n))
        imfs, residue = emd_decompose(signal)
        assert reconstruction_error(signal, imfs, residue) < 1e-9
        for imf in imfs:
            assert_imf_invariants(imf)


def test_residue_has_little_oscillation_left():
    t = np.linspace(0.0, 1.0, 800)
    signal = np.sin(2 * np.pi * 7 * t) + 3.0 * t
    imfs, residue = emd_decompose(signal)
    assert len(imfs) >= 1
    assert count_extrema(residue) < 2 or len(imfs) == 10


def test_short_signal_rejected():
    with pytest.raises(ValueError):
        emd_decompose(np.array([1.0, 2.0, 3.0]))


def test_max_imfs_cap():
    rng = np.random.default_rng(5)
    signal = rng.normal(size=600)
    imfs, _ = emd_decompose(signal, max_imfs=2)
    assert len(imfs) <= 2


# ---------------------------------------------------------------------------
# features
# ---------------------------------------------------------------------------

def test_alternating_signal_zcr():
    fv = feature_vector(np.array([1.0, -1.0, 1.0, -1.0]))
    assert fv.zcr == 1.0
    assert fv.rms == 1.0
    assert fv.min == -1.0 and fv.max == 1.0


def test_constant_signal_features():
    fv = feature_vector(np.full(20, -3.0))
    assert fv.rms == 3.0
    assert fv.zcr == 0.0
    assert fv.shannon_entropy == 0.0


def test_uniform_histogram_maximizes_entropy():
    values = np.linspace(0.0, 1.0, 16, endpoint=False) + 1.0 / 32.0
    assert shannon_entropy(values, bins=16) == pytest.approx(4.0)


def test_entropy_bounded_by_log2_bins():
    rng = np.random.default_rng(2)
    values = rng.normal(size=500)
    assert 0.0 <= shannon_entropy(values, bins=16) <= 4.0


def test_log_energy_floor_guard():
    assert log_energy(np.zeros(4)) == pytest.approx(4 * math.log(1e-300))
    assert math.isfinite(log_energy(np.array([0.0, 2.0])))


def test_exact_zeros_do_not_count_as_crossings():
    assert zero_crossing_rate(np.array([1.0, 0.0, -1.0])) == 0.0
    assert zero_crossing_rate(np.array([1.0, -1.0, 1.0])) == 1.0


@given(st.lists(st.floats(-100, 100).map(lambda v: 0.0 if abs(v) < 1e-6 else v),
                min_size=2, max_size=50),
       st.floats(min_value=0.01, max_value=50.0))
def test_scale_covariance(values, c):
    x = np.asarray(values)
    assert rms(c * x) == pytest.approx(abs(c) * rms(x), rel=1e-9, abs=1e-12)
    assert zero_crossing_rate(c * x) == zero_crossing_rate(x)
    fv = feature_vector(x) if len(x) else None
    if fv is not None:
        scaled = feature_vector(c * x)
        assert scaled.min == pytest.approx(c * fv.min, rel=1e-9, abs=1e-12)
        assert scaled.max == pytest.approx(c * fv.max, rel=1e-9, abs=1e-12)


def test_empty_signal_rejected():
    with pytest.raises(ValueError):
        feature_vector(np.array([]))


# ---------------------------------------------------------------------------
# quartiles
# ---------------------------------------------------------------------------

def test_quartiles_one_to_eight():
    stats = quartile_stats(np.arange(1.0, 9.0))
    assert stats.q2 == 4.5
    assert stats.q1 == 2.5
    assert stats.q3 == 6.5
    assert stats.iqr == 4.0
    assert stats.outliers == ()


def test_all_equal_data():
    stats = quartile_stats(np.full(10, 7.0))
    assert stats.iqr == 0.0
    assert stats.outliers == ()
    assert stats.suspected_outliers == ()


def test_far_point_is_in_both_outlier_lists():
    data = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 100.0])
    stats = quartile_stats(data)
    assert 8 in stats.outliers
    assert 8 in stats.suspected_outliers


def test_suspected_but_not_outlier():
    # with [1..8, 20] the quartiles give fences at 15 (1.5x) and 22.5 (3x)
    probe = np.append(np.arange(1.0, 9.0), 20.0)
    stats = quartile_stats(probe)
    assert 8 in stats.suspected_outliers
    assert 8 not in stats.outliers


def test_quartiles_need_four_samples():
    with pytest.raises(ValueError):
        quartile_stats(np.array([1.0, 2.0, 3.0]))


def test_quartile_ordering_invariant():
    rng = np.random.default_rng(8)
    for _ in range(20):
        stats = quartile_stats(rng.normal(size=rng.integers(4, 40)))
        assert stats.q1 <= stats.q2 <= stats.q3
        assert stats.iqr == pytest.approx(stats.q3 - stats.q1)
