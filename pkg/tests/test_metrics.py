"""Metric fixtures, penalty behavior, curve and ordered-plot diagnostics."""

import math

import numpy as np
import pytest

from calconform.core import Axis, Interval, PredictionRecord, ValidationError
from calconform.metrics import (
    CurvePoint,
    MetricsReport,
    calibration_curve,
    compute_report,
    interval_score,
    moving_average,
    mpiw,
    ordered_plot_data,
    picp,
)


def iv(lo, hi):
    return Interval(lo, hi)


def test_picp_fixtures():
    assert picp([0.2, 0.8], [iv(0, 1), iv(0, 1)]) == 1.0
    assert picp([0.5, 5.0], [iv(0, 1), iv(0, 1)]) == 0.5
    # boundary counts as covered
    assert picp([1.0, 2.0, 3.0], [iv(0, 1)] * 3) == pytest.approx(1.0 / 3.0)


def test_picp_errors():
    with pytest.raises(ValidationError):
        picp([], [])
    with pytest.raises(ValidationError):
        picp([1.0], [iv(0, 1), iv(0, 1)])


def test_mpiw_fixtures():
    assert mpiw([iv(0, 1), iv(0, 3)]) == 2.0
    assert mpiw([iv(-0.5, 0.5)]) == 1.0
    assert mpiw([iv(0, 1), iv(-math.inf, math.inf)]) == math.inf
    with pytest.raises(ValidationError):
        mpiw([])


def test_interval_score_fixtures():
    assert interval_score([0.5], [iv(0, 1)], 0.1) == pytest.approx(1.0)
    assert interval_score([1.2], [iv(0, 1)], 0.1) == pytest.approx(5.0)
    assert interval_score([-0.3], [iv(0, 1)], 0.1) == pytest.approx(7.0)


def test_interval_score_errors():
    with pytest.raises(ValidationError):
        interval_score([], [], 0.1)
    with pytest.raises(ValidationError):
        interval_score([1.0], [iv(0, 1), iv(0, 2)], 0.1)
    with pytest.raises(ValidationError):
        interval_score([1.0], [iv(0, 1)], 1.0)


def test_interval_score_penalty_tradeoff():
    # widening a covering interval strictly increases the score
    assert interval_score([0.5], [iv(-0.5, 1.5)], 0.1) > interval_score([0.5], [iv(0, 1)], 0.1)
    # shrinking until the truth is excluded also increases it: the width
    # saving (0.55) is dwarfed by the 20 * 0.05 = 1.0 penalty
    assert interval_score([0.5], [iv(0, 0.45)], 0.1) == pytest.approx(0.45 + 20 * 0.05)
    assert interval_score([0.5], [iv(0, 0.45)], 0.1) > interval_score([0.5], [iv(0, 1)], 0.1)


def test_interval_score_dominates_mpiw():
    rng = np.random.default_rng(9)
    for _ in range(100):
        n = int(rng.integers(1, 30))
        truths = rng.normal(size=n)
        centers = truths + rng.normal(size=n) * 0.8
        half = np.abs(rng.normal(size=n))
        intervals = [iv(c - h, c + h) for c, h in zip(centers, half)]
        score = interval_score(truths, intervals, 0.1)
        assert score >= mpiw(intervals)
        if picp(truths, intervals) == 1.0:
            assert score == pytest.approx(mpiw(intervals), rel=1e-12)
        else:
            assert score > mpiw(intervals)


def test_infinite_interval_poisons_score():
    score = interval_score([0.0, 50.0], [iv(-math.inf, math.inf), iv(0, 1)], 0.1)
    assert score == math.inf


def make_score_records(scores, axis=Axis.X):
    return [
        PredictionRecord(f"s{i}", axis, 0.0, float(s), 1.0) for i, s in enumerate(scores)
    ]


def test_calibration_curve_on_sample_fixture():
    records = make_score_records(range(1, 10))
    points = calibration_curve(records, records, [0.5])
    assert len(points) == 1
    assert points[0].expected == 0.5
    assert points[0].observed == pytest.approx(5.0 / 9.0)
    assert points[0].observed >= 0.5


def test_calibration_curve_empty_grid_and_errors():
    records = make_score_records([1, 2, 3])
    assert calibration_curve(records, records, []) == []
    with pytest.raises(ValidationError):
        calibration_curve([], records, [0.1])
    with pytest.raises(ValidationError):
        calibration_curve(records, make_score_records([1, 2], axis=Axis.Y), [0.1])


def test_calibration_curve_observed_non_increasing_in_alpha():
    rng = np.random.default_rng(17)
    truths = rng.normal(size=400)
    y_hat = truths + rng.normal(size=400)
    sigma = np.abs(rng.normal(size=400)) + 0.1
    records = [
        PredictionRecord(f"s{i}", Axis.ROLL, truths[i], y_hat[i], sigma[i]) for i in range(400)
    ]
    points = calibration_curve(records[200:], records[:200], np.arange(0.02, 0.9, 0.02))
    observed = [p.observed for p in points]
    assert all(a >= b for a, b in zip(observed, observed[1:]))


def test_moving_average():
    assert list(moving_average([0.0, 3.0, 0.0], 1)) == [0.0, 3.0, 0.0]
    assert list(moving_average([0.0, 3.0, 0.0], 3)) == [1.5, 1.0, 1.5]
    assert list(moving_average([2.0] * 5, 3)) == [2.0] * 5
    with pytest.raises(ValidationError):
        moving_average([1.0], 2)
    with pytest.raises(ValidationError):
        moving_average([1.0], 0)


def plot_records(y_true, y_hat, axis=Axis.X):
    return [
        PredictionRecord(f"s{i}", axis, t, h, 1.0)
        for i, (t, h) in enumerate(zip(y_true, y_hat))
    ]


def test_ordered_plot_data_window1_identity():
    records = plot_records([2.0, 0.0, 1.0], [2.5, -0.5, 1.25])
    intervals = [iv(r.y_hat - 1, r.y_hat + 1) for r in records]
    points = ordered_plot_data(records, intervals, window=1)
    assert [p.index for p in points] == [1, 2, 0]
    assert [p.y_true for p in points] == [0.0, 1.0, 2.0]
    assert [p.deviation for p in points] == [-0.5, 0.25, 0.5]
    assert [p.lower_dev for p in points] == [-1.5, -0.75, -0.5]
    assert [p.upper_dev for p in points] == [0.5, 1.25, 1.5]


def test_ordered_plot_data_smoothing_fixture():
    # deviations {0, 3, 0} over sorted truths, window 3: center 1, edges 1.5
    records = plot_records([0.0, 1.0, 2.0], [0.0, 4.0, 2.0])
    intervals = [iv(r.y_hat - 1, r.y_hat + 1) for r in records]
    points = ordered_plot_data(records, intervals, window=3)
    assert [p.deviation for p in points] == [1.5, 1.0, 1.5]
    assert [p.lower_dev for p in points] == [0.5, 0.0, 0.5]
    assert [p.upper_dev for p in points] == [2.5, 2.0, 2.5]


def test_ordered_plot_data_constant_series_unchanged():
    records = plot_records([0.0, 1.0, 2.0, 3.0], [0.5, 1.5, 2.5, 3.5])
    intervals = [iv(r.y_hat - 1, r.y_hat + 1) for r in records]
    for window in (1, 3, 51):
        points = ordered_plot_data(records, intervals, window=window)
        assert [p.deviation for p in points] == [0.5] * 4


def test_ordered_plot_data_stable_ties_and_permutation():
    records = plot_records([1.0, 0.0, 1.0, 0.0], [1.1, 0.1, 1.2, 0.2])
    intervals = [iv(-10, 10)] * 4
    points = ordered_plot_data(records, intervals, window=1)
    assert [p.index for p in points] == [1, 3, 0, 2]  # ties keep input order
    assert sorted(p.index for p in points) == [0, 1, 2, 3]
    y = [p.y_true for p in points]
    assert y == sorted(y)


def test_ordered_plot_data_errors_and_empty():
    records = plot_records([0.0], [0.1])
    with pytest.raises(ValidationError):
        ordered_plot_data(records, [], window=1)
    assert ordered_plot_data([], [], window=3) == []


def test_ordered_plot_data_with_infinite_intervals():
    records = plot_records([0.0, 1.0, 2.0], [0.1, 1.1, 2.1])
    intervals = [iv(-math.inf, math.inf)] * 3
    points = ordered_plot_data(records, intervals, window=3)
    assert all(p.lower_dev == -math.inf and p.upper_dev == math.inf for p in points)


def test_compute_report_and_validation():
    truths = [0.5, 3.0]
    intervals = [iv(0, 1), iv(0, 1)]
    report = compute_report(Axis.PITCH, 0.1, truths, intervals)
    assert report.picp == 0.5
    assert report.mpiw == 1.0
    assert report.interval_score == pytest.approx(1.0 + 0.5 * 20 * 2.0)
    assert report.target_coverage == pytest.approx(0.9)
    assert report.n == 2

    with pytest.raises(ValidationError):
        MetricsReport(Axis.X, 0.1, picp=1.2, mpiw=1.0, interval_score=1.0, n=5)
    with pytest.raises(ValidationError):
        MetricsReport(Axis.X, 0.1, picp=0.5, mpiw=2.0, interval_score=1.0, n=5)
    with pytest.raises(ValidationError):
        MetricsReport(Axis.X, 0.1, picp=0.5, mpiw=1.0, interval_score=1.0, n=0)


def test_curve_point_validation():
    with pytest.raises(ValidationError):
        CurvePoint(expected=1.2, observed=0.5)
    with pytest.raises(ValidationError):
        CurvePoint(expected=0.5, observed=-0.1)
