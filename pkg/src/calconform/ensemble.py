"""Aggregation of stochastic forward passes into a point prediction and spread.

The spread is the population standard deviation (divide by N, not N-1) of
the passes, so it is zero exactly when every pass agrees.
"""

import numpy as np

from .core import EnsemblePrediction, PredictionRecord, ValidationError
from dataclasses import dataclass


@dataclass(frozen=True)
class AggregateResult:
    """Ensemble mean and population standard deviation."""

    y_hat: float
    sigma: float


def aggregate(passes) -> AggregateResult:
    """Collapse one ensemble of passes into (mean, population std).

    Requires at least two finite passes; a single pass carries no
    dispersion information.
    """
    arr = np.asarray(passes, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"passes must be one-dimensional, got shape {arr.shape}")
    if arr.size < 2:
        raise ValidationError(f"need at least 2 passes to aggregate, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("passes contain non-finite values")
    if np.ptp(arr) == 0.0:
        # constant ensemble: avoid float residue so sigma == 0 holds exactly
        return AggregateResult(float(arr[0]), 0.0)
    return AggregateResult(float(arr.mean()), float(arr.std()))


def aggregate_matrix(passes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise `aggregate` for an (n_samples, n_passes) matrix.

    Returns (y_hat, sigma) arrays of length n_samples. Used on the
    simulation hot path; row i matches aggregate(passes[i]).
    """
    passes = np.asarray(passes, dtype=float)
    if passes.ndim != 2:
        raise ValidationError(f"expected a 2-d pass matrix, got shape {passes.shape}")
    if passes.shape[1] < 2:
        raise ValidationError(f"need at least 2 passes per row, got {passes.shape[1]}")
    if not np.all(np.isfinite(passes)):
        raise ValidationError("pass matrix contains non-finite values")
    y_hat = passes.mean(axis=1)
    sigma = passes.std(axis=1)
    constant = np.ptp(passes, axis=1) == 0.0
    if np.any(constant):
        y_hat = np.where(constant, passes[:, 0], y_hat)
        sigma = np.where(constant, 0.0, sigma)
    return y_hat, sigma


def aggregate_record(ensemble: EnsemblePrediction, y_true: float) -> PredictionRecord:
    """Join an aggregated ensemble with its ground truth."""
    result = aggregate(ensemble.passes)
    return PredictionRecord(
        sample_id=ensemble.sample_id,
        axis=ensemble.axis,
        y_true=float(y_true),
        y_hat=result.y_hat,
        sigma=result.sigma,
    )
