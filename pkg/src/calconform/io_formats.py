"""CSV (and JSON, for reports) interchange formats.

Every CSV file starts with one commented metadata line, then an exact
header row. Reals are rendered with 6 significant digits; infinite
bounds are written as the literal tokens "inf"/"-inf" and parsed back.
Parsers reject rather than coerce: NaN, missing fields, unknown axis
labels, duplicate keys and ragged ensembles are all hard errors carrying
the file path and line number. Given identical inputs, writers produce
byte-identical files.
"""

import csv
import json
import math
from dataclasses import dataclass

from ._version import __version__
from .conformal import Calibrator
from .core import (
    Axis,
    EnsemblePrediction,
    Interval,
    PredictionRecord,
    ValidationError,
    axis_from_label,
    axis_sort_key,
)
from .metrics import CurvePoint, MetricsReport

ENSEMBLE_COLUMNS = ["sample_id", "axis", "pass_idx", "value"]
RECORD_COLUMNS = ["sample_id", "axis", "y_true", "y_hat", "sigma"]
CALIBRATOR_COLUMNS = ["axis", "alpha", "q", "m"]
INTERVAL_COLUMNS = ["sample_id", "axis", "alpha", "y_hat", "sigma", "lower", "upper", "covered"]
REPORT_COLUMNS = ["axis", "alpha", "target_coverage", "picp", "mpiw", "interval_score", "n"]
CURVE_COLUMNS = ["axis", "expected", "observed"]
PLOT_COLUMNS = ["axis", "rank", "y_true", "deviation", "lower_dev", "upper_dev"]


class ParseError(ValidationError):
    """A file failed validation; the message carries path and line number."""


@dataclass(frozen=True)
class IntervalRow:
    """One serialized prediction interval with its provenance."""

    sample_id: str
    axis: Axis
    alpha: float
    y_hat: float
    sigma: float
    interval: Interval
    covered: bool


@dataclass(frozen=True)
class PlotDataRow:
    """One deserialized row of ordered-interval plot data."""

    axis: Axis
    rank: int
    y_true: float
    deviation: float
    lower_dev: float
    upper_dev: float


def _fmt(value: float) -> str:
    return format(float(value), ".6g")


def _meta_line(meta=None) -> str:
    pairs = {"tool": f"calconform/{__version__}"}
    if meta:
        pairs.update(meta)
    return "# " + " ".join(f"{k}={v}" for k, v in pairs.items())


def _err(path, lineno, message) -> ParseError:
    return ParseError(f"{path}:{lineno}: {message}")


def _parse_float(token, path, lineno, column, allow_inf=False) -> float:
    try:
        value = float(token)
    except ValueError:
        raise _err(path, lineno, f"column {column!r}: cannot parse {token!r} as a number") from None
    if math.isnan(value):
        raise _err(path, lineno, f"column {column!r}: NaN is not allowed")
    if math.isinf(value) and not allow_inf:
        raise _err(path, lineno, f"column {column!r}: must be finite, got {token!r}")
    return value


def _parse_int(token, path, lineno, column) -> int:
    try:
        return int(token)
    except ValueError:
        raise _err(path, lineno, f"column {column!r}: cannot parse {token!r} as an integer") from None


def _parse_axis(token, path, lineno) -> Axis:
    try:
        return axis_from_label(token)
    except ValidationError as exc:
        raise _err(path, lineno, str(exc)) from None


def _parse_bool(token, path, lineno, column) -> bool:
    if token == "true":
        return True
    if token == "false":
        return False
    raise _err(path, lineno, f"column {column!r}: expected 'true' or 'false', got {token!r}")


def _read_table(path, base_columns, optional_columns=()):
    """Parse one CSV file into (header, [(lineno, row), ...]).

    Skips comment lines, checks the header matches the exact expected
    column order (optionally extended by optional_columns), and checks
    row widths.
    """
    rows = []
    header = None
    with open(path, "r", newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        for row in reader:
            lineno = reader.line_num
            if not row or row[0].lstrip().startswith("#"):
                continue
            if header is None:
                allowed = [list(base_columns)] + [
                    list(base_columns) + list(optional_columns[: i + 1])
                    for i in range(len(optional_columns))
                ]
                if row not in allowed:
                    raise _err(
                        path, lineno,
                        f"bad header {row!r}, expected {','.join(base_columns)}"
                        + (f" (optionally +{','.join(optional_columns)})" if optional_columns else ""),
                    )
                header = row
                continue
            if len(row) != len(header):
                raise _err(path, lineno, f"expected {len(header)} fields, got {len(row)}")
            rows.append((lineno, row))
    if header is None:
        raise _err(path, 0, "missing header row")
    return header, rows


def _write_table(path, header, rows, meta=None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(_meta_line(meta) + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# ensembles: one row per (sample, axis, pass)

def write_ensembles(ensembles, path, truths=None, meta=None) -> None:
    """Write raw ensembles; adds a y_true column when truths are given.

    `truths` maps (sample_id, axis) to the ground truth and must cover
    every ensemble when present.
    """
    header = ENSEMBLE_COLUMNS + (["y_true"] if truths is not None else [])
    rows = []
    for ens in ensembles:
        truth_cell = []
        if truths is not None:
            key = (ens.sample_id, ens.axis)
            if key not in truths:
                raise ValidationError(f"no ground truth for {ens.sample_id}/{ens.axis}")
            truth_cell = [_fmt(truths[key])]
        for idx, value in enumerate(ens.passes):
            rows.append([ens.sample_id, ens.axis.value, str(idx), _fmt(value)] + truth_cell)
    _write_table(path, header, rows, meta)


def read_ensembles(path):
    """Read ensembles back, grouped and validated.

    Returns (ensembles, truths) where truths is None when the file has no
    y_true column. Ensembles are ordered by (sample_id, axis).
    """
    header, rows = _read_table(path, ENSEMBLE_COLUMNS, optional_columns=("y_true",))
    has_truth = "y_true" in header
    if not rows:
        raise _err(path, 0, "no data rows")

    passes: dict[tuple[str, Axis], dict[int, float]] = {}
    truths: dict[tuple[str, Axis], float] = {}
    first_line: dict[tuple[str, Axis], int] = {}
    for lineno, row in rows:
        sample_id = row[0]
        axis = _parse_axis(row[1], path, lineno)
        pass_idx = _parse_int(row[2], path, lineno, "pass_idx")
        if pass_idx < 0:
            raise _err(path, lineno, f"pass_idx must be >= 0, got {pass_idx}")
        value = _parse_float(row[3], path, lineno, "value")
        key = (sample_id, axis)
        group = passes.setdefault(key, {})
        if pass_idx in group:
            raise _err(path, lineno, f"duplicate pass {pass_idx} for {sample_id}/{axis}")
        group[pass_idx] = value
        first_line.setdefault(key, lineno)
        if has_truth:
            y_true = _parse_float(row[4], path, lineno, "y_true")
            if key in truths and truths[key] != y_true:
                raise _err(path, lineno, f"inconsistent y_true for {sample_id}/{axis}")
            truths[key] = y_true

    sorted_keys = sorted(passes, key=lambda k: (k[0], axis_sort_key(k[1])))
    n_passes = None
    reference_key = None
    ensembles = []
    for key in sorted_keys:
        group = passes[key]
        indices = sorted(group)
        if indices != list(range(len(group))):
            raise _err(
                path, first_line[key],
                f"pass indices for {key[0]}/{key[1]} are not contiguous from 0",
            )
        if n_passes is None:
            n_passes, reference_key = len(group), key
        elif len(group) != n_passes:
            raise _err(
                path, first_line[key],
                f"ragged ensembles: {key[0]}/{key[1]} has {len(group)} passes "
                f"but {reference_key[0]}/{reference_key[1]} has {n_passes}",
            )
        ensembles.append(
            EnsemblePrediction(
                sample_id=key[0], axis=key[1], passes=tuple(group[i] for i in indices)
            )
        )
    return ensembles, (truths if has_truth else None)


# ---------------------------------------------------------------------------
# records: one row per (sample, axis)

def write_records(records, path, meta=None) -> None:
    rows = [
        [r.sample_id, r.axis.value, _fmt(r.y_true), _fmt(r.y_hat), _fmt(r.sigma)]
        for r in records
    ]
    _write_table(path, RECORD_COLUMNS, rows, meta)


def read_records(path) -> list[PredictionRecord]:
    """Read prediction records, ordered by (sample_id, axis)."""
    _, rows = _read_table(path, RECORD_COLUMNS)
    if not rows:
        raise _err(path, 0, "no data rows")
    seen: set[tuple[str, Axis]] = set()
    records = []
    for lineno, row in rows:
        sample_id = row[0]
        axis = _parse_axis(row[1], path, lineno)
        key = (sample_id, axis)
        if key in seen:
            raise _err(path, lineno, f"duplicate record for {sample_id}/{axis}")
        seen.add(key)
        sigma = _parse_float(row[4], path, lineno, "sigma")
        if sigma < 0:
            raise _err(path, lineno, f"sigma must be >= 0, got {sigma}")
        records.append(
            PredictionRecord(
                sample_id=sample_id,
                axis=axis,
                y_true=_parse_float(row[2], path, lineno, "y_true"),
                y_hat=_parse_float(row[3], path, lineno, "y_hat"),
                sigma=sigma,
            )
        )
    records.sort(key=lambda r: (r.sample_id, axis_sort_key(r.axis)))
    return records


# ---------------------------------------------------------------------------
# calibrators: one row per (axis, alpha)

def write_calibrators(calibrators, path, meta=None) -> None:
    rows = [
        [c.axis.value, _fmt(c.alpha), _fmt(c.q), str(c.m)]
        for c in calibrators
    ]
    _write_table(path, CALIBRATOR_COLUMNS, rows, meta)


def read_calibrators(path) -> list[Calibrator]:
    _, rows = _read_table(path, CALIBRATOR_COLUMNS)
    calibrators = []
    for lineno, row in rows:
        axis = _parse_axis(row[0], path, lineno)
        alpha = _parse_float(row[1], path, lineno, "alpha")
        q = _parse_float(row[2], path, lineno, "q", allow_inf=True)
        m = _parse_int(row[3], path, lineno, "m")
        try:
            calibrators.append(Calibrator(axis=axis, alpha=alpha, q=q, m=m))
        except ValidationError as exc:
            raise _err(path, lineno, str(exc)) from None
    return calibrators


# ---------------------------------------------------------------------------
# intervals: one row per (sample, axis, alpha)

def write_intervals(rows, path, meta=None) -> None:
    table = [
        [
            r.sample_id,
            r.axis.value,
            _fmt(r.alpha),
            _fmt(r.y_hat),
            _fmt(r.sigma),
            _fmt(r.interval.lower),
            _fmt(r.interval.upper),
            "true" if r.covered else "false",
        ]
        for r in rows
    ]
    _write_table(path, INTERVAL_COLUMNS, table, meta)


def read_intervals(path) -> list[IntervalRow]:
    _, rows = _read_table(path, INTERVAL_COLUMNS)
    out = []
    for lineno, row in rows:
        axis = _parse_axis(row[1], path, lineno)
        alpha = _parse_float(row[2], path, lineno, "alpha")
        if not (0.0 < alpha < 1.0):
            raise _err(path, lineno, f"alpha must lie in (0, 1), got {alpha}")
        lower = _parse_float(row[5], path, lineno, "lower", allow_inf=True)
        upper = _parse_float(row[6], path, lineno, "upper", allow_inf=True)
        try:
            interval = Interval(lower, upper)
        except ValidationError as exc:
            raise _err(path, lineno, str(exc)) from None
        out.append(
            IntervalRow(
                sample_id=row[0],
                axis=axis,
                alpha=alpha,
                y_hat=_parse_float(row[3], path, lineno, "y_hat"),
                sigma=_parse_float(row[4], path, lineno, "sigma"),
                interval=interval,
                covered=_parse_bool(row[7], path, lineno, "covered"),
            )
        )
    return out


# ---------------------------------------------------------------------------
# metric reports: CSV plus a JSON mirror

def write_report(reports, path, meta=None) -> None:
    rows = [
        [
            r.axis.value,
            _fmt(r.alpha),
            _fmt(r.target_coverage),
            _fmt(r.picp),
            _fmt(r.mpiw),
            _fmt(r.interval_score),
            str(r.n),
        ]
        for r in reports
    ]
    _write_table(path, REPORT_COLUMNS, rows, meta)


def read_report(path) -> list[MetricsReport]:
    _, rows = _read_table(path, REPORT_COLUMNS)
    reports = []
    for lineno, row in rows:
        axis = _parse_axis(row[0], path, lineno)
        try:
            reports.append(
                MetricsReport(
                    axis=axis,
                    alpha=_parse_float(row[1], path, lineno, "alpha"),
                    picp=_parse_float(row[3], path, lineno, "picp"),
                    mpiw=_parse_float(row[4], path, lineno, "mpiw", allow_inf=True),
                    interval_score=_parse_float(row[5], path, lineno, "interval_score", allow_inf=True),
                    n=_parse_int(row[6], path, lineno, "n"),
                )
            )
        except ValidationError as exc:
            if isinstance(exc, ParseError):
                raise
            raise _err(path, lineno, str(exc)) from None
    return reports


def _json_real(value: float):
    # strict JSON has no Infinity literal; mirror the CSV token instead
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(_fmt(value))


def write_report_json(reports, path, meta=None) -> None:
    payload = {
        "meta": dict({"tool": f"calconform/{__version__}"}, **(meta or {})),
        "reports": [
            {
                "axis": r.axis.value,
                "alpha": _json_real(r.alpha),
                "target_coverage": _json_real(r.target_coverage),
                "picp": _json_real(r.picp),
                "mpiw": _json_real(r.mpiw),
                "interval_score": _json_real(r.interval_score),
                "n": r.n,
            }
            for r in reports
        ],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, allow_nan=False)
        handle.write("\n")


def _from_json_real(value) -> float:
    if value == "inf":
        return math.inf
    if value == "-inf":
        return -math.inf
    return float(value)


def read_report_json(path) -> list[MetricsReport]:
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    return [
        MetricsReport(
            axis=axis_from_label(entry["axis"]),
            alpha=_from_json_real(entry["alpha"]),
            picp=_from_json_real(entry["picp"]),
            mpiw=_from_json_real(entry["mpiw"]),
            interval_score=_from_json_real(entry["interval_score"]),
            n=int(entry["n"]),
        )
        for entry in payload["reports"]
    ]


# ---------------------------------------------------------------------------
# reliability curves

def write_curve(rows, path, meta=None) -> None:
    """Write (axis, CurvePoint) pairs in the given order."""
    table = [
        [axis.value, _fmt(point.expected), _fmt(point.observed)]
        for axis, point in rows
    ]
    _write_table(path, CURVE_COLUMNS, table, meta)


def read_curve(path) -> list[tuple[Axis, CurvePoint]]:
    _, rows = _read_table(path, CURVE_COLUMNS)
    out = []
    for lineno, row in rows:
        axis = _parse_axis(row[0], path, lineno)
        try:
            point = CurvePoint(
                expected=_parse_float(row[1], path, lineno, "expected"),
                observed=_parse_float(row[2], path, lineno, "observed"),
            )
        except ValidationError as exc:
            if isinstance(exc, ParseError):
                raise
            raise _err(path, lineno, str(exc)) from None
        out.append((axis, point))
    return out


# ---------------------------------------------------------------------------
# ordered-interval plot data

def write_plot_data(points_by_axis, path, meta=None) -> None:
    """Write per-axis PlotPoint sequences; rank is the within-axis position."""
    rows = []
    for axis, points in points_by_axis:
        for rank, point in enumerate(points):
            rows.append(
                [
                    axis.value,
                    str(rank),
                    _fmt(point.y_true),
                    _fmt(point.deviation),
                    _fmt(point.lower_dev),
                    _fmt(point.upper_dev),
                ]
            )
    _write_table(path, PLOT_COLUMNS, rows, meta)


def read_plot_data(path) -> list[PlotDataRow]:
    _, rows = _read_table(path, PLOT_COLUMNS)
    out = []
    for lineno, row in rows:
        rank = _parse_int(row[1], path, lineno, "rank")
        if rank < 0:
            raise _err(path, lineno, f"rank must be >= 0, got {rank}")
        out.append(
            PlotDataRow(
                axis=_parse_axis(row[0], path, lineno),
                rank=rank,
                y_true=_parse_float(row[2], path, lineno, "y_true"),
                deviation=_parse_float(row[3], path, lineno, "deviation"),
                lower_dev=_parse_float(row[4], path, lineno, "lower_dev", allow_inf=True),
                upper_dev=_parse_float(row[5], path, lineno, "upper_dev", allow_inf=True),
            )
        )
    return out
