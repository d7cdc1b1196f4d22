"""Distribution-free prediction intervals for stochastic regression ensembles.

The toolkit turns repeated stochastic predictions (for example dropout
ensembles) into intervals with a guaranteed marginal coverage level:
ensembles are aggregated into (mean, spread) records, a per-axis
calibrator is fit on held-out records by taking an order statistic of
sigma-normalized residual scores, and intervals follow as
mean +- q * sigma. Interval quality is measured with coverage (picp),
mean width (mpiw) and the interval score, plus reliability-curve and
ordered-interval plot data. A seeded six-axis simulator provides
exchangeable data to exercise the guarantee end to end, and the
``calconform`` command line drives the whole pipeline on CSV files.

>>> import calconform as cc
>>> trial = cc.run_trial(cc.SimConfig(seed=0, n_samples=2000))
>>> cal = cc.fit_calibrator(trial.calibration[cc.Axis.X], alpha=0.1)
>>> iv = cc.predict_interval(cal, y_hat=0.2, sigma=1.3)
"""

from ._version import __version__
from .conformal import (
    SIGMA_FLOOR,
    Calibrator,
    conformal_quantile,
    fit_calibrator,
    nonconformity_score,
    normal_baseline_bounds,
    normal_baseline_interval,
    normal_quantile,
    predict_bounds,
    predict_interval,
    quantile_rank,
)
from .core import (
    AXES,
    ROTATION_AXES,
    TRANSLATION_AXES,
    Axis,
    CoverageConfig,
    EnsemblePrediction,
    Interval,
    PredictionRecord,
    ValidationError,
    axis_from_label,
    covers,
    group_by_axis,
    width,
)
from .ensemble import AggregateResult, aggregate, aggregate_matrix, aggregate_record
from .metrics import (
    CurvePoint,
    MetricsReport,
    PlotPoint,
    calibration_curve,
    compute_report,
    interval_score,
    moving_average,
    mpiw,
    ordered_plot_data,
    picp,
)
from .synthetic import (
    RNG_ALGORITHM,
    NoiseModel,
    SimConfig,
    TrialData,
    draw_ensemble,
    draw_ground_truth,
    run_trial,
    sample_dataset,
)

__all__ = [
    "__version__",
    "AXES",
    "AggregateResult",
    "Axis",
    "Calibrator",
    "CoverageConfig",
    "CurvePoint",
    "EnsemblePrediction",
    "Interval",
    "MetricsReport",
    "NoiseModel",
    "PlotPoint",
    "PredictionRecord",
    "ROTATION_AXES",
    "RNG_ALGORITHM",
    "SIGMA_FLOOR",
    "SimConfig",
    "TRANSLATION_AXES",
    "TrialData",
    "ValidationError",
    "aggregate",
    "aggregate_matrix",
    "aggregate_record",
    "axis_from_label",
    "calibration_curve",
    "compute_report",
    "conformal_quantile",
    "covers",
    "draw_ensemble",
    "draw_ground_truth",
    "fit_calibrator",
    "group_by_axis",
    "interval_score",
    "moving_average",
    "mpiw",
    "nonconformity_score",
    "normal_baseline_bounds",
    "normal_baseline_interval",
    "normal_quantile",
    "ordered_plot_data",
    "picp",
    "predict_bounds",
    "predict_interval",
    "quantile_rank",
    "run_trial",
    "sample_dataset",
    "width",
]
