"""Aggregation fixtures, equivariance properties and the naive-loop oracle."""

import math

import numpy as np
import pytest

from calconform.core import Axis, EnsemblePrediction, ValidationError
from calconform.ensemble import aggregate, aggregate_matrix, aggregate_record


def naive_aggregate(passes):
    """Two-pass reference: explicit loop summation, no numpy."""
    n = len(passes)
    total = 0.0
    for v in passes:
        total += v
    mean = total / n
    sq = 0.0
    for v in passes:
        sq += (v - mean) ** 2
    return mean, math.sqrt(sq / n)


def test_constant_ensemble():
    res = aggregate([2, 2, 2])
    assert res.y_hat == 2.0 and res.sigma == 0.0
    # non-dyadic constants must still give exactly zero spread
    res = aggregate([0.1] * 5)
    assert res.y_hat == 0.1 and res.sigma == 0.0


def test_hand_computed_fixtures():
    res = aggregate([1, 3])
    assert res.y_hat == pytest.approx(2.0, rel=1e-12)
    assert res.sigma == pytest.approx(1.0, rel=1e-12)

    res = aggregate([0, 0, 4])
    assert res.y_hat == pytest.approx(4.0 / 3.0, rel=1e-12)
    assert res.sigma == pytest.approx(math.sqrt(96.0 / 27.0), rel=1e-12)


def test_aggregate_errors():
    with pytest.raises(ValidationError):
        aggregate([])
    with pytest.raises(ValidationError):
        aggregate([1.0])
    with pytest.raises(ValidationError):
        aggregate([1.0, math.nan])
    with pytest.raises(ValidationError):
        aggregate([1.0, math.inf])


def test_aggregate_record():
    rec = aggregate_record(EnsemblePrediction("s1", Axis.Y, (1.0, 3.0)), 2.5)
    assert (rec.y_hat, rec.sigma, rec.y_true) == (2.0, 1.0, 2.5)
    assert rec.sample_id == "s1" and rec.axis is Axis.Y

    rec = aggregate_record(EnsemblePrediction("s2", Axis.Z, (5.0, 5.0, 5.0)), 5.0)
    assert (rec.y_hat, rec.sigma, rec.y_true) == (5.0, 0.0, 5.0)

    with pytest.raises(ValidationError):
        aggregate_record(EnsemblePrediction("s3", Axis.X, ()), 0.0)


def test_properties_on_random_ensembles():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        n = int(rng.integers(2, 40))
        passes = rng.normal(loc=rng.uniform(-5, 5), scale=rng.uniform(0.1, 3), size=n)
        res = aggregate(passes)

        # naive-loop oracle
        mean, std = naive_aggregate(list(passes))
        assert res.y_hat == pytest.approx(mean, rel=1e-12, abs=1e-12)
        assert res.sigma == pytest.approx(std, rel=1e-12, abs=1e-12)

        # shift equivariance
        c = float(rng.uniform(-100, 100))
        shifted = aggregate(passes + c)
        assert shifted.y_hat == pytest.approx(res.y_hat + c, rel=1e-9, abs=1e-9)
        assert shifted.sigma == pytest.approx(res.sigma, rel=1e-9, abs=1e-9)

        # scale equivariance
        k = float(rng.uniform(-4, 4))
        scaled = aggregate(k * passes)
        assert scaled.y_hat == pytest.approx(k * res.y_hat, rel=1e-9, abs=1e-12)
        assert scaled.sigma == pytest.approx(abs(k) * res.sigma, rel=1e-9, abs=1e-12)

        # permutation invariance
        permuted = aggregate(rng.permutation(passes))
        assert permuted.y_hat == pytest.approx(res.y_hat, rel=1e-12)
        assert permuted.sigma == pytest.approx(res.sigma, rel=1e-12, abs=1e-15)


def test_two_pass_spread_is_half_gap():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a, b = rng.normal(size=2) * 10
        assert aggregate([a, b]).sigma == pytest.approx(abs(a - b) / 2, rel=1e-12, abs=1e-15)


def test_aggregate_matrix_matches_rowwise_aggregate():
    rng = np.random.default_rng(3)
    passes = rng.normal(size=(50, 7))
    passes[13] = 0.3  # constant row
    y_hat, sigma = aggregate_matrix(passes)
    for i in range(passes.shape[0]):
        row = aggregate(passes[i])
        assert y_hat[i] == row.y_hat
        assert sigma[i] == row.sigma
    with pytest.raises(ValidationError):
        aggregate_matrix(passes[:, :1])
