"""Split-style calibration of sigma-normalized residual scores.

A calibrator is fit once on held-out (truth, prediction, sigma) triples
for a single axis: each triple is scored by its normalized absolute
residual, and the interval half-width multiplier q is an order statistic
of those scores. Intervals built with q then cover the truth with
probability at least 1 - alpha whenever calibration and test data are
exchangeable, no matter how the underlying predictor behaves.

Also provides the normal-assumption baseline that trusts sigma directly
with a Gaussian quantile, used to show why the calibrated route is needed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import Axis, Interval, PredictionRecord, ValidationError

#: Floor applied to sigma in both score computation and interval
#: construction, keeping the two mutually coherent when sigma == 0.
SIGMA_FLOOR = 1e-9

# Snap tolerance for the order-statistic rank: if (m+1)*(1-alpha) is this
# close to an integer, treat it as that integer before taking the ceiling.
# Guards against float representation flipping the rank (e.g. 10 * 0.9).
_RANK_SNAP = 1e-9


@dataclass(frozen=True)
class Calibrator:
    """Per-axis interval multiplier q fit for one miscoverage rate alpha.

    q may be +inf when the calibration set is too small for the requested
    alpha; intervals built from such a calibrator are infinite.
    """

    axis: Axis
    alpha: float
    q: float
    m: int

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if math.isnan(self.q) or self.q < 0:
            raise ValidationError(f"q must be >= 0 or +inf, got {self.q}")
        if self.m < 1:
            raise ValidationError(f"calibration size m must be >= 1, got {self.m}")


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"alpha must lie strictly in (0, 1), got {alpha}")
    return alpha


def nonconformity_score(record: PredictionRecord) -> float:
    """Normalized absolute residual |y_hat - y_true| / max(sigma, floor)."""
    return abs(record.y_hat - record.y_true) / max(record.sigma, SIGMA_FLOOR)


def quantile_rank(m: int, alpha: float) -> int:
    """1-based rank of the score order statistic used as the multiplier.

    The rank is the ceiling of (m+1)*(1-alpha), snapped to the nearest
    integer first when within 1e-9 of one. Ranks above m signal that m
    is too small for the requested alpha (the quantile overflows).
    """
    target = (m + 1) * (1.0 - _check_alpha(alpha))
    nearest = round(target)
    if abs(target - nearest) <= _RANK_SNAP:
        k = int(nearest)
    else:
        k = math.ceil(target)
    return max(k, 1)


def conformal_quantile(scores, alpha: float) -> float:
    """The calibration-score order statistic for miscoverage alpha.

    Returns +inf when the rank exceeds the number of scores; intervals
    built from an overflowed quantile are infinite but still valid.
    """
    alpha = _check_alpha(alpha)
    arr = np.asarray(scores, dtype=float)
    if arr.size == 0:
        raise ValidationError("cannot take a quantile of an empty score list")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValidationError("scores must be finite and non-negative")
    k = quantile_rank(arr.size, alpha)
    if k > arr.size:
        return math.inf
    return float(np.sort(arr)[k - 1])


def _fit_from_scores(axis: Axis, scores: np.ndarray, alpha: float) -> Calibrator:
    return Calibrator(axis=axis, alpha=alpha, q=conformal_quantile(scores, alpha), m=int(scores.size))


def fit_calibrator(records, alpha: float) -> Calibrator:
    """Fit a calibrator from same-axis records at miscoverage alpha."""
    records = list(records)
    if not records:
        raise ValidationError("cannot fit a calibrator on an empty record list")
    axes = {r.axis for r in records}
    if len(axes) > 1:
        labels = ", ".join(sorted(a.value for a in axes))
        raise ValidationError(f"calibration records mix axes: {labels}")
    scores = np.array([nonconformity_score(r) for r in records])
    return _fit_from_scores(records[0].axis, scores, alpha)


def predict_interval(calibrator: Calibrator, y_hat: float, sigma: float) -> Interval:
    """Interval [y_hat - q*sigma, y_hat + q*sigma] with the sigma floor."""
    margin = calibrator.q * max(float(sigma), SIGMA_FLOOR)
    return Interval(y_hat - margin, y_hat + margin)


def predict_bounds(calibrator: Calibrator, y_hat, sigma) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized `predict_interval`: (lower, upper) arrays for array inputs."""
    y_hat = np.asarray(y_hat, dtype=float)
    margin = calibrator.q * np.maximum(np.asarray(sigma, dtype=float), SIGMA_FLOOR)
    return y_hat - margin, y_hat + margin


def normal_quantile(p: float) -> float:
    """Standard-normal quantile, found by bisecting the erfc-based CDF.

    No closed-form approximation constants; the bracket is narrowed to
    1e-10 before returning the midpoint.
    """
    p = float(p)
    if not (0.0 < p < 1.0):
        raise ValidationError(f"probability must lie in (0, 1), got {p}")
    lo, hi = -40.0, 40.0
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if 0.5 * math.erfc(-mid / math.sqrt(2.0)) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def normal_baseline_interval(y_hat: float, sigma: float, alpha: float) -> Interval:
    """Uncalibrated interval y_hat +- z*sigma with z the normal quantile.

    Trusts sigma as a true Gaussian scale; carries no coverage guarantee
    and is provided for comparison against the calibrated intervals.
    """
    z = normal_quantile(1.0 - _check_alpha(alpha) / 2.0)
    margin = z * float(sigma)
    return Interval(y_hat - margin, y_hat + margin)


def normal_baseline_bounds(y_hat, sigma, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized `normal_baseline_interval`."""
    z = normal_quantile(1.0 - _check_alpha(alpha) / 2.0)
    y_hat = np.asarray(y_hat, dtype=float)
    margin = z * np.asarray(sigma, dtype=float)
    return y_hat - margin, y_hat + margin
