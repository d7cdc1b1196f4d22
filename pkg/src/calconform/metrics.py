"""Interval quality metrics and plot-ready diagnostics.

Coverage (picp) counts truths falling inside their closed intervals;
mean width (mpiw) measures sharpness; the interval score combines width
with (2/alpha)-scaled penalties for misses, so lower is better and it
equals mpiw exactly when every truth is covered. Infinite intervals
poison mpiw and the interval score to +inf rather than being skipped,
since dropping them would misreport efficiency.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import Axis, ValidationError
from .conformal import _fit_from_scores, nonconformity_score, predict_bounds


@dataclass(frozen=True)
class MetricsReport:
    """Interval quality summary for one axis at one miscoverage rate."""

    axis: Axis
    alpha: float
    picp: float
    mpiw: float
    interval_score: float
    n: int

    def __post_init__(self):
        if not (0.0 <= self.picp <= 1.0):
            raise ValidationError(f"picp must lie in [0, 1], got {self.picp}")
        if math.isnan(self.mpiw) or self.mpiw < 0:
            raise ValidationError(f"mpiw must be >= 0 or +inf, got {self.mpiw}")
        if math.isnan(self.interval_score) or self.interval_score < self.mpiw:
            raise ValidationError("interval score cannot be below mean width")
        if self.n < 1:
            raise ValidationError(f"test count n must be >= 1, got {self.n}")

    @property
    def target_coverage(self) -> float:
        return 1.0 - self.alpha


@dataclass(frozen=True)
class CurvePoint:
    """One reliability-curve point: target coverage vs empirical coverage."""

    expected: float
    observed: float

    def __post_init__(self):
        if not (0.0 <= self.expected <= 1.0 and 0.0 <= self.observed <= 1.0):
            raise ValidationError(
                f"curve point out of [0, 1]: expected={self.expected}, observed={self.observed}"
            )


@dataclass(frozen=True)
class PlotPoint:
    """One row of ordered-interval plot data, deviations relative to truth."""

    index: int
    y_true: float
    deviation: float
    lower_dev: float
    upper_dev: float


def _bounds_arrays(intervals) -> tuple[np.ndarray, np.ndarray]:
    lower = np.array([iv.lower for iv in intervals], dtype=float)
    upper = np.array([iv.upper for iv in intervals], dtype=float)
    return lower, upper


def _check_paired(truths: np.ndarray, intervals) -> None:
    if len(intervals) == 0:
        raise ValidationError("metrics need at least one interval")
    if truths.shape[0] != len(intervals):
        raise ValidationError(
            f"got {truths.shape[0]} truths for {len(intervals)} intervals"
        )


def picp(truths, intervals) -> float:
    """Fraction of truths inside their closed intervals."""
    truths = np.asarray(truths, dtype=float)
    _check_paired(truths, intervals)
    lower, upper = _bounds_arrays(intervals)
    return float(np.mean((truths >= lower) & (truths <= upper)))


def _widths(lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    # matches core.width: any infinite bound makes the width infinite
    return np.where(np.isinf(lower) | np.isinf(upper), np.inf, upper - lower)


def mpiw(intervals) -> float:
    """Mean interval width; +inf as soon as any interval is infinite."""
    if len(intervals) == 0:
        raise ValidationError("metrics need at least one interval")
    lower, upper = _bounds_arrays(intervals)
    return float(np.mean(_widths(lower, upper)))


def interval_score(truths, intervals, alpha: float) -> float:
    """Mean width plus (2/alpha)-scaled penalties for uncovered truths."""
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"alpha must lie strictly in (0, 1), got {alpha}")
    truths = np.asarray(truths, dtype=float)
    _check_paired(truths, intervals)
    lower, upper = _bounds_arrays(intervals)
    below = np.clip(lower - truths, 0.0, None)
    above = np.clip(truths - upper, 0.0, None)
    return float(np.mean(_widths(lower, upper) + (2.0 / alpha) * (below + above)))


def compute_report(axis: Axis, alpha: float, truths, intervals) -> MetricsReport:
    """Bundle picp, mpiw and the interval score into one report row."""
    return MetricsReport(
        axis=axis,
        alpha=float(alpha),
        picp=picp(truths, intervals),
        mpiw=mpiw(intervals),
        interval_score=interval_score(truths, intervals, alpha),
        n=len(intervals),
    )


def calibration_curve(records, calib_records, alphas) -> list[CurvePoint]:
    """Observed vs expected coverage over a grid of miscoverage rates.

    For each alpha a calibrator is fit on `calib_records` and evaluated on
    `records`; both lists must be non-empty and share a single axis.
    """
    records = list(records)
    calib_records = list(calib_records)
    if not records or not calib_records:
        raise ValidationError("calibration curve needs non-empty record lists")
    axes = {r.axis for r in records} | {r.axis for r in calib_records}
    if len(axes) > 1:
        labels = ", ".join(sorted(a.value for a in axes))
        raise ValidationError(f"calibration curve records mix axes: {labels}")
    axis = records[0].axis

    scores = np.array([nonconformity_score(r) for r in calib_records])
    y_true = np.array([r.y_true for r in records])
    y_hat = np.array([r.y_hat for r in records])
    sigma = np.array([r.sigma for r in records])

    points = []
    for alpha in alphas:
        calibrator = _fit_from_scores(axis, scores, float(alpha))
        lower, upper = predict_bounds(calibrator, y_hat, sigma)
        observed = float(np.mean((y_true >= lower) & (y_true <= upper)))
        points.append(CurvePoint(expected=1.0 - float(alpha), observed=observed))
    return points


def moving_average(values, window: int) -> np.ndarray:
    """Centered moving average, window truncated at the edges.

    Window must be odd; window=1 returns the input unchanged.
    """
    if window < 1 or window % 2 == 0:
        raise ValidationError(f"smoothing window must be odd and >= 1, got {window}")
    values = np.asarray(values, dtype=float)
    if window == 1:
        return values.copy()
    half = window // 2
    n = values.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = values[max(0, i - half): i + half + 1].mean()
    return out


def ordered_plot_data(records, intervals, window: int = 51) -> list[PlotPoint]:
    """Deviation series sorted by ground truth, smoothed for plotting.

    Samples are sorted by y_true (stable, so ties keep input order); the
    prediction and both interval bounds are re-expressed as deviations
    from the truth and each series is smoothed with a centered moving
    average of the given odd window, truncated near the edges. The
    returned indices are positions in the input lists.
    """
    records = list(records)
    if len(records) != len(intervals):
        raise ValidationError(
            f"got {len(records)} records for {len(intervals)} intervals"
        )
    if not records:
        return []
    y_true = np.array([r.y_true for r in records])
    y_hat = np.array([r.y_hat for r in records])
    lower, upper = _bounds_arrays(intervals)

    order = np.argsort(y_true, kind="stable")
    y_true = y_true[order]
    deviation = moving_average(y_hat[order] - y_true, window)
    lower_dev = moving_average(lower[order] - y_true, window)
    upper_dev = moving_average(upper[order] - y_true, window)

    return [
        PlotPoint(
            index=int(order[i]),
            y_true=float(y_true[i]),
            deviation=float(deviation[i]),
            lower_dev=float(lower_dev[i]),
            upper_dev=float(upper_dev[i]),
        )
        for i in range(len(records))
    ]
