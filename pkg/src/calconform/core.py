"""Shared value types: axes, ensembles, records, intervals.

Everything here is an immutable value object; instances can be shared
freely across threads. Units are fixed per axis (centimeters for
translations, degrees for rotations) and values are stored as plain
unit-free floats with the axis carrying the unit.
"""

import enum
import math
from dataclasses import dataclass


class ValidationError(ValueError):
    """A domain value violates its invariants."""


class Axis(enum.Enum):
    """One of the six scalar regression targets.

    X, Y, Z are translations measured in centimeters; Roll, Pitch, Yaw
    are rotations measured in degrees.
    """

    X = "X"
    Y = "Y"
    Z = "Z"
    ROLL = "Roll"
    PITCH = "Pitch"
    YAW = "Yaw"

    @property
    def is_translation(self) -> bool:
        return self in (Axis.X, Axis.Y, Axis.Z)

    @property
    def is_rotation(self) -> bool:
        return not self.is_translation

    @property
    def unit(self) -> str:
        return "cm" if self.is_translation else "deg"

    def __str__(self) -> str:
        return self.value


TRANSLATION_AXES = (Axis.X, Axis.Y, Axis.Z)
ROTATION_AXES = (Axis.ROLL, Axis.PITCH, Axis.YAW)
#: Canonical ordering used for every per-axis iteration and file layout.
AXES = TRANSLATION_AXES + ROTATION_AXES

_AXIS_BY_LABEL = {a.value: a for a in AXES}
_AXIS_ORDER = {a: i for i, a in enumerate(AXES)}


def axis_from_label(label: str) -> Axis:
    """Look up an axis by its exact, case-sensitive label."""
    try:
        return _AXIS_BY_LABEL[label]
    except KeyError:
        valid = ", ".join(_AXIS_BY_LABEL)
        raise ValidationError(f"unknown axis label {label!r} (expected one of: {valid})") from None


def axis_sort_key(axis: Axis) -> int:
    """Position of an axis in the canonical X, Y, Z, Roll, Pitch, Yaw order."""
    return _AXIS_ORDER[axis]


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class EnsemblePrediction:
    """Raw stochastic forward-pass outputs for one sample on one axis."""

    sample_id: str
    axis: Axis
    passes: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "passes", tuple(float(v) for v in self.passes))
        if not self.passes:
            raise ValidationError(f"ensemble {self.sample_id}/{self.axis} has no passes")
        for v in self.passes:
            if not math.isfinite(v):
                raise ValidationError(
                    f"ensemble {self.sample_id}/{self.axis} contains non-finite pass value {v}"
                )

    @property
    def n_passes(self) -> int:
        return len(self.passes)


@dataclass(frozen=True)
class PredictionRecord:
    """One aggregated sample on one axis: truth, point prediction, spread."""

    sample_id: str
    axis: Axis
    y_true: float
    y_hat: float
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "y_true", _require_finite("y_true", self.y_true))
        object.__setattr__(self, "y_hat", _require_finite("y_hat", self.y_hat))
        object.__setattr__(self, "sigma", _require_finite("sigma", self.sigma))
        if self.sigma < 0:
            raise ValidationError(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class Interval:
    """Closed prediction interval [lower, upper]; bounds may be infinite."""

    lower: float
    upper: float

    def __post_init__(self):
        lower, upper = float(self.lower), float(self.upper)
        if math.isnan(lower) or math.isnan(upper):
            raise ValidationError("interval bounds must not be NaN")
        if lower > upper:
            raise ValidationError(f"interval lower bound {lower} exceeds upper bound {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)


@dataclass(frozen=True)
class CoverageConfig:
    """A target miscoverage rate alpha; the interval aims to cover 1 - alpha."""

    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (0.0 < alpha < 1.0):
            raise ValidationError(f"alpha must lie strictly in (0, 1), got {alpha}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def coverage_level(self) -> float:
        return 1.0 - self.alpha


def width(interval: Interval) -> float:
    """Interval width; infinite if either bound is infinite."""
    if math.isinf(interval.lower) or math.isinf(interval.upper):
        return math.inf
    return interval.upper - interval.lower


def covers(interval: Interval, y: float) -> bool:
    """Whether y falls inside the closed interval (boundary points count)."""
    return interval.lower <= y <= interval.upper


def group_by_axis(records) -> dict[Axis, list]:
    """Split a record sequence into per-axis lists, keyed in canonical order."""
    grouped: dict[Axis, list] = {}
    for rec in records:
        grouped.setdefault(rec.axis, []).append(rec)
    return {axis: grouped[axis] for axis in AXES if axis in grouped}
