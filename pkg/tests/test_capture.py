import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaitforge.capture import (
    DegenerateNormalizationError,
    TimeSeries,
    TwoLinkGeometry,
    UnreachableError,
    counts_to_angle,
    counts_to_force,
    fk_two_link,
    ik_alg1_batch,
    ik_two_link,
    load_accelerometer_csv,
    load_joint_angle_csv,
    smooth_cubic_spline,
    smooth_moving_average,
    write_joint_angle_csv,
    zero_correct,
)


# ---------------------------------------------------------------------------
# digital-count conversions
# ---------------------------------------------------------------------------

def test_angle_conversion_examples():
    assert counts_to_angle(500, 500) == 0.0
    assert counts_to_angle(999, 0) == pytest.approx(299.7)
    assert counts_to_angle(200, 100) == pytest.approx(30.0)


def test_force_conversion_examples():
    assert counts_to_force(0) == 0.0
    assert counts_to_force(100) == 9.8
    assert counts_to_force(50) == pytest.approx(4.9)


def test_count_range_errors():
    with pytest.raises(ValueError):
        counts_to_angle(1000, 0)
    with pytest.raises(ValueError):
        counts_to_angle(10, -1)
    with pytest.raises(ValueError):
        counts_to_force(1000)


@given(st.integers(min_value=0, max_value=999), st.integers(min_value=0, max_value=999))
def test_angle_conversion_is_affine_and_invertible(theta, theta0):
    angle = counts_to_angle(theta, theta0)
    recovered = angle / (300.0 / 1000.0) + theta0
    assert recovered == pytest.approx(theta, abs=1e-9)


@given(st.integers(min_value=0, max_value=999))
def test_force_conversion_invertible(f):
    assert counts_to_force(f) / (9.8 / 100.0) == pytest.approx(f, abs=1e-9)


# ---------------------------------------------------------------------------
# kinematics
# ---------------------------------------------------------------------------

def test_full_extension():
    geom = TwoLinkGeometry()
    t1, t2 = ik_two_link(geom.l1 + geom.l2, 0.0, geom)
    assert t1 == pytest.approx(0.0, abs=1e-12)
    assert t2 == pytest.approx(0.0, abs=1e-12)


def test_default_geometry_matches_capture_routine():
    geom = TwoLinkGeometry()
    assert (geom.l1, geom.l2) == (5.0, 4.0)


def test_fk_examples():
    geom = TwoLinkGeometry()
    _, tip = fk_two_link(0.0, 0.0, geom)
    assert tip == (pytest.approx(9.0), pytest.approx(0.0, abs=1e-12))
    _, tip = fk_two_link(math.pi / 2, 0.0, geom)
    assert tip[0] == pytest.approx(0.0, abs=1e-12)
    assert tip[1] == pytest.approx(9.0)


def test_fk_ik_named_angles_roundtrip():
    geom = TwoLinkGeometry()
    _, tip = fk_two_link(0.5236, 0.7854, geom)
    t1, t2 = ik_two_link(*tip, geom)
    assert t1 == pytest.approx(0.5236, abs=1e-9)
    assert t2 == pytest.approx(0.7854, abs=1e-9)


def test_roundtrip_100_random_reachable_points():
    geom = TwoLinkGeometry()
    rng = np.random.default_rng(1)
    for _ in range(100):
        t1 = rng.uniform(-math.pi, math.pi)
        t2 = rng.uniform(0.0, math.pi)
        _, tip = fk_two_link(t1, t2, geom)
        r1, r2 = ik_two_link(*tip, geom, elbow="down")
        _, tip2 = fk_two_link(r1, r2, geom)
        assert math.hypot(tip[0] - tip2[0], tip[1] - tip2[1]) < 1e-9


def test_elbow_up_branch():
    geom = TwoLinkGeometry()
    _, tip = fk_two_link(0.4, -0.9, geom)
    r1, r2 = ik_two_link(*tip, geom, elbow="up")
    assert r2 == pytest.approx(-0.9, abs=1e-9)
    assert r1 == pytest.approx(0.4, abs=1e-9)


def test_unreachable_points():
    geom = TwoLinkGeometry()
    with pytest.raises(UnreachableError):
        ik_two_link(10.0, 0.0, geom)
    with pytest.raises(UnreachableError):
        ik_two_link(0.1, 0.0, geom)  # inside the annulus hole


def test_boundary_point_within_slack_resolves():
    geom = TwoLinkGeometry(l1=1.0, l2=1.0)
    t1, t2 = ik_two_link(2.0 + 5e-10, 0.0, geom)
    assert t2 == pytest.approx(0.0, abs=1e-4)


# ---------------------------------------------------------------------------
# batch routine with max-normalization
# ---------------------------------------------------------------------------

def test_single_sample_full_extension():
    xs = TimeSeries(np.array([9.0]))
    ys = TimeSeries(np.array([0.0]))
    t1, t2 = ik_alg1_batch(xs, ys)
    assert t2.values[0] == pytest.approx(0.0, abs=1e-12)


def test_constant_series_gives_constant_output():
    xs = TimeSeries(np.full(10, 6.0))
    ys = TimeSeries(np.full(10, 2.0))
    t1, t2 = ik_alg1_batch(xs, ys)
    assert np.all(t1.values == t1.values[0])
    assert np.all(t2.values == t2.values[0])


def test_agrees_with_exact_ik_when_batch_max_is_one():
    # include a full-extension sample so max(tmp) == 1
    geom = TwoLinkGeometry()
    xs = TimeSeries(np.array([9.0, 5.0, 6.0, 7.5]))
    ys = TimeSeries(np.array([0.0, 3.0, 2.0, 1.0]))
    t1, t2 = ik_alg1_batch(xs, ys, geom)
    for i, (x, y) in enumerate(zip(xs.values, ys.values)):
        e1, e2 = ik_two_link(float(x), float(y), geom)
        assert t1.values[i] == e1
        assert t2.values[i] == e2


def test_degenerate_normalization():
    geom = TwoLinkGeometry(l1=1.0, l2=1.0)
    # x^2 + y^2 == l1^2 + l2^2 makes tmp identically zero
    xs = TimeSeries(np.array([1.0]))
    ys = TimeSeries(np.array([1.0]))
    with pytest.raises(DegenerateNormalizationError):
        ik_alg1_batch(xs, ys, geom)


def test_length_mismatch():
    with pytest.raises(ValueError):
        ik_alg1_batch(TimeSeries(np.zeros(3)), TimeSeries(np.zeros(4)))


# ---------------------------------------------------------------------------
# conditioning
# ---------------------------------------------------------------------------

def test_zero_correct_examples():
    assert list(zero_correct(TimeSeries(np.array([5.0, 7.0, 9.0]))).values) == [0.0, 2.0, 4.0]
    assert np.all(zero_correct(TimeSeries(np.full(5, 3.3))).values == 0.0)


def test_zero_correct_idempotent():
    series = TimeSeries(np.array([2.0, -1.0, 4.0]))
    once = zero_correct(series)
    assert np.array_equal(zero_correct(once).values, once.values)


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30), st.floats(-10, 10))
def test_zero_correct_linear(values, scale):
    arr = np.asarray(values)
    lhs = zero_correct(TimeSeries(arr * scale)).values
    rhs = scale * zero_correct(TimeSeries(arr)).values
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-6)


def test_zero_correct_empty():
    with pytest.raises(ValueError):
        zero_correct(TimeSeries(np.array([])))


def test_smooth_constant_unchanged():
    series = TimeSeries(np.full(11, 2.5))
    assert np.allclose(smooth_moving_average(series).values, 2.5, atol=1e-12)


def test_smooth_single_pass_hand_trace():
    out = smooth_moving_average(TimeSeries(np.array([0.0, 3.0, 0.0])))
    assert np.allclose(out.values, [1.0, 1.0, 1.0])


def test_smooth_preserves_length():
    rng = np.random.default_rng(0)
    for n in (3, 5, 20, 101):
        series = TimeSeries(rng.normal(size=n))
        assert len(smooth_moving_average(series)) == n


@given(st.lists(st.floats(-100, 100), min_size=3, max_size=40))
def test_smoothing_is_a_convex_combination(values):
    series = TimeSeries(np.asarray(values))
    out = smooth_moving_average(series).values
    assert out.max() <= series.values.max() + 1e-9
    assert out.min() >= series.values.min() - 1e-9


def test_smooth_needs_three_samples():
    with pytest.raises(ValueError):
        smooth_moving_average(TimeSeries(np.array([1.0, 2.0])))


def test_spline_smoother_interpolates_knots():
    t = np.arange(21.0)
    series = TimeSeries(np.sin(t / 3.0), dt=1.0)
    out = smooth_cubic_spline(series, knot_stride=5)
    assert len(out) == len(series)
    # knots are reproduced exactly
    for i in range(0, 21, 5):
        assert out.values[i] == pytest.approx(series.values[i], abs=1e-12)


# ---------------------------------------------------------------------------
# CSV formats
# ---------------------------------------------------------------------------

def test_accelerometer_csv_roundtrip(tmp_path):
    path = tmp_path / "acc.csv"
    path.write_text("t,x,y,z\n0.0,1.0,2.0,3.0\n0.01,1.5,2.5,3.5\n")
    series = load_accelerometer_csv(path)
    assert series["x"].dt == pytest.approx(0.01)
    assert list(series["y"].values) == [2.0, 2.5]


def test_accelerometer_csv_line_numbered_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,x,y,z\n0.0,1.0,2.0,3.0\n0.01,oops,2.5,3.5\n")
    with pytest.raises(ValueError, match="line 3"):
        load_accelerometer_csv(path)
    path.write_text("time,x,y\n")
    with pytest.raises(ValueError, match="line 1"):
        load_accelerometer_csv(path)


def test_joint_angle_csv_roundtrip(tmp_path):
    path = tmp_path / "angles.csv"
    t = [0.0, 0.1, 0.2]
    write_joint_angle_csv(path, t, [1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    rt, a, b = load_joint_angle_csv(path)
    assert np.allclose(rt, t)
    assert np.allclose(a, [1.0, 2.0, 3.0])
    assert np.allclose(b, [4.0, 5.0, 6.0])


def test_timeseries_validation():
    with pytest.raises(ValueError):
        TimeSeries(np.array([1.0, float("nan")]))
    with pytest.raises(ValueError):
        TimeSeries(np.array([1.0]), dt=0.0)
