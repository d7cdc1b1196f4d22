"""Command-line pipeline around the library.

    calconform simulate  --samples 11000 --calib-fraction 0.091 --seed 7 --output data/
    calconform calibrate --input data/calibration.csv --output data/calibrators.csv
    calconform predict   --input data/test.csv --calibrator data/calibrators.csv --output data/intervals.csv
    calconform evaluate  --input data/test.csv --calibrator data/calibrators.csv --output data/report.csv
    calconform curve     --input data/test.csv --calib-input data/calibration.csv \
                         --alpha 0.05,0.1,0.2,0.3 --output data/curve.csv
    calconform plotdata  --input data/test.csv --calibrator data/calibrators.csv \
                         --alpha 0.1 --window 51 --output data/plotdata.csv

Exit codes: 0 success, 1 usage error, 2 data error. Warnings go to
stderr; identical flags and seed produce byte-identical outputs. Existing
output files are never overwritten unless --force is given.
"""

import argparse
import math
import os
import sys

from ._version import __version__
from .conformal import fit_calibrator, normal_baseline_interval, predict_interval
from .core import (
    AXES,
    CoverageConfig,
    ValidationError,
    axis_sort_key,
    covers,
    group_by_axis,
)
from .io_formats import (
    IntervalRow,
    read_calibrators,
    read_ensembles,
    read_records,
    write_calibrators,
    write_curve,
    write_ensembles,
    write_intervals,
    write_plot_data,
    write_records,
    write_report,
    write_report_json,
)
from .ensemble import aggregate_record
from .metrics import calibration_curve, compute_report, ordered_plot_data
from .synthetic import RNG_ALGORITHM, NoiseModel, SimConfig, run_trial, sample_dataset

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

DEFAULT_ALPHAS = "0.1,0.05,0.01"


class UsageError(Exception):
    """Bad flags or refused overwrite; exits with status 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; this tool reserves 2 for
    # data errors and uses 1 for usage
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value: float) -> str:
    return format(float(value), ".6g")


def _parse_alphas(text: str) -> list[float]:
    alphas = []
    for piece in text.split(","):
        piece = piece.strip()
        try:
            alphas.append(CoverageConfig(float(piece)).alpha)
        except (ValueError, ValidationError):
            raise UsageError(
                f"bad alpha {piece!r}: expected a comma list of numbers strictly in (0, 1)"
            ) from None
    if not alphas:
        raise UsageError("at least one alpha is required")
    return alphas


def _check_overwrite(paths, force: bool) -> None:
    for path in paths:
        if not force and os.path.exists(path):
            raise UsageError(f"output file {path} exists; pass --force to overwrite")


def _alpha_key(alpha: float) -> str:
    return _fmt(alpha)


def _add_io_options(parser, with_calibrator=False, calibrator_help="calibrator CSV file"):
    parser.add_argument("--input", required=True, help="input CSV file")
    if with_calibrator:
        parser.add_argument("--calibrator", help=calibrator_help)
    parser.add_argument("--output", required=True, help="output CSV file")
    parser.add_argument("--force", action="store_true", help="overwrite existing outputs")


def _add_alpha_option(parser, help_text="comma list of miscoverage rates alpha"):
    parser.add_argument("--alpha", default=DEFAULT_ALPHAS, help=f"{help_text} (default {DEFAULT_ALPHAS})")


def _add_baseline_option(parser):
    parser.add_argument(
        "--baseline",
        choices=("conformal", "normal"),
        default="conformal",
        help="interval construction: calibrated (default) or the uncalibrated normal assumption",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="calconform", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"calconform {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("simulate", help="generate a synthetic trial and write its files")
    p.add_argument("--samples", type=int, default=1000, help="total sample count (default 1000)")
    p.add_argument("--passes", type=int, default=25, help="stochastic passes per sample (default 25)")
    p.add_argument("--noise", choices=("gaussian", "student_t"), default="gaussian")
    p.add_argument("--dof", type=float, default=3.0, help="degrees of freedom for student_t (default 3)")
    p.add_argument("--base-scale", type=float, default=1.0)
    p.add_argument("--hetero-scale", type=float, default=0.5)
    p.add_argument("--trans-range", type=float, default=10.0, help="translation truth range in cm")
    p.add_argument("--rot-range", type=float, default=1.0, help="rotation truth range in deg")
    p.add_argument("--calib-fraction", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("aggregate", help="collapse an ensemble file into records")
    _add_io_options(p)
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("calibrate", help="fit per-axis interval multipliers")
    _add_io_options(p)
    _add_alpha_option(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("predict", help="build intervals for a record file")
    _add_io_options(p, with_calibrator=True)
    _add_alpha_option(p)
    _add_baseline_option(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score intervals: coverage, width, interval score")
    _add_io_options(p, with_calibrator=True)
    _add_alpha_option(p)
    _add_baseline_option(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("curve", help="observed vs expected coverage over an alpha grid")
    _add_io_options(p)
    p.add_argument("--calib-input", required=True, help="calibration records CSV file")
    _add_alpha_option(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("plotdata", help="ordered, smoothed interval plot data")
    _add_io_options(p, with_calibrator=True)
    _add_alpha_option(p, help_text="single miscoverage rate alpha")
    _add_baseline_option(p)
    p.add_argument("--window", type=int, default=51, help="odd moving-average window (default 51)")
    p.set_defaults(func=cmd_plotdata)

    return parser


def _sorted_records(groups) -> list:
    flat = [r for axis in groups for r in groups[axis]]
    flat.sort(key=lambda r: (r.sample_id, axis_sort_key(r.axis)))
    return flat


def cmd_simulate(args) -> int:
    try:
        noise = NoiseModel(
            family=args.noise,
            dof=args.dof,
            hetero_scale=args.hetero_scale,
            base_scale=args.base_scale,
        )
        config = SimConfig(
            seed=args.seed,
            n_samples=args.samples,
            n_passes=args.passes,
            noise=noise,
            trans_range_cm=args.trans_range,
            rot_range_deg=args.rot_range,
            calib_fraction=args.calib_fraction,
        )
    except ValidationError as exc:
        raise UsageError(str(exc)) from None

    paths = {
        name: os.path.join(args.output, f"{name}.csv")
        for name in ("ensembles", "calibration", "test")
    }
    _check_overwrite(paths.values(), args.force)
    os.makedirs(args.output, exist_ok=True)

    meta = {
        "rng": RNG_ALGORITHM,
        "seed": str(config.seed),
        "noise": noise.family,
        "passes": str(config.n_passes),
        "samples": str(config.n_samples),
        "calib_fraction": _fmt(config.calib_fraction),
    }
    ensembles, truths = sample_dataset(config)
    write_ensembles(ensembles, paths["ensembles"], truths=truths, meta=meta)

    trial = run_trial(config)
    write_records(_sorted_records(trial.calibration), paths["calibration"], meta=meta)
    write_records(_sorted_records(trial.test), paths["test"], meta=meta)

    n_calib, n_test = config.split_sizes()
    print(f"wrote {args.output}: calibration={n_calib} test={n_test} axes={len(AXES)} passes={config.n_passes}")
    return EXIT_OK


def cmd_aggregate(args) -> int:
    _check_overwrite([args.output], args.force)
    ensembles, truths = read_ensembles(args.input)
    if truths is None:
        raise ValidationError(f"{args.input} has no y_true column; cannot build records")
    records = [aggregate_record(e, truths[(e.sample_id, e.axis)]) for e in ensembles]
    write_records(records, args.output)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    alphas = _parse_alphas(args.alpha)
    _check_overwrite([args.output], args.force)
    groups = group_by_axis(read_records(args.input))
    calibrators = []
    for axis in groups:
        for alpha in alphas:
            cal = fit_calibrator(groups[axis], alpha)
            if math.isinf(cal.q):
                print(
                    f"warning: axis {axis} alpha {_fmt(alpha)}: m={cal.m} is too small, "
                    f"intervals will be infinite; increase calibration set size or alpha",
                    file=sys.stderr,
                )
            calibrators.append(cal)
    write_calibrators(calibrators, args.output, meta={"alpha": args.alpha.replace(" ", "")})
    return EXIT_OK


def _load_calibrators(args, alphas, groups):
    """Map (axis, alpha) to calibrators, checking every pair is present."""
    if not args.calibrator:
        raise UsageError("--calibrator is required unless --baseline normal is given")
    lookup = {(c.axis, _alpha_key(c.alpha)): c for c in read_calibrators(args.calibrator)}
    for axis in groups:
        for alpha in alphas:
            if (axis, _alpha_key(alpha)) not in lookup:
                raise ValidationError(
                    f"no calibrator for axis {axis} at alpha {_fmt(alpha)} in {args.calibrator}"
                )
    return lookup


def _intervals_for(records, axis, alpha, baseline, lookup):
    if baseline == "normal":
        return [normal_baseline_interval(r.y_hat, r.sigma, alpha) for r in records]
    cal = lookup[(axis, _alpha_key(alpha))]
    return [predict_interval(cal, r.y_hat, r.sigma) for r in records]


def cmd_predict(args) -> int:
    alphas = _parse_alphas(args.alpha)
    _check_overwrite([args.output], args.force)
    groups = group_by_axis(read_records(args.input))
    lookup = _load_calibrators(args, alphas, groups) if args.baseline == "conformal" else None

    rows = []
    for axis in groups:
        for alpha in alphas:
            records = groups[axis]
            for record, interval in zip(records, _intervals_for(records, axis, alpha, args.baseline, lookup)):
                rows.append(
                    IntervalRow(
                        sample_id=record.sample_id,
                        axis=axis,
                        alpha=alpha,
                        y_hat=record.y_hat,
                        sigma=record.sigma,
                        interval=interval,
                        covered=covers(interval, record.y_true),
                    )
                )
    write_intervals(rows, args.output, meta={"alpha": args.alpha.replace(" ", ""), "baseline": args.baseline})
    return EXIT_OK


def cmd_evaluate(args) -> int:
    alphas = _parse_alphas(args.alpha)
    json_path = os.path.splitext(args.output)[0] + ".json"
    _check_overwrite([args.output, json_path], args.force)
    groups = group_by_axis(read_records(args.input))
    lookup = _load_calibrators(args, alphas, groups) if args.baseline == "conformal" else None

    reports = []
    for axis in groups:
        records = groups[axis]
        truths = [r.y_true for r in records]
        for alpha in alphas:
            intervals = _intervals_for(records, axis, alpha, args.baseline, lookup)
            reports.append(compute_report(axis, alpha, truths, intervals))

    meta = {"alpha": args.alpha.replace(" ", ""), "baseline": args.baseline}
    write_report(reports, args.output, meta=meta)
    write_report_json(reports, json_path, meta=meta)
    return EXIT_OK


def cmd_curve(args) -> int:
    alphas = _parse_alphas(args.alpha)
    _check_overwrite([args.output], args.force)
    test_groups = group_by_axis(read_records(args.input))
    calib_groups = group_by_axis(read_records(args.calib_input))

    rows = []
    for axis in test_groups:
        if axis not in calib_groups:
            raise ValidationError(f"axis {axis} present in {args.input} but not in {args.calib_input}")
        for point in calibration_curve(test_groups[axis], calib_groups[axis], alphas):
            rows.append((axis, point))
    write_curve(rows, args.output, meta={"alpha": args.alpha.replace(" ", "")})
    return EXIT_OK


def cmd_plotdata(args) -> int:
    alphas = _parse_alphas(args.alpha)
    if len(alphas) != 1:
        raise UsageError("plotdata takes exactly one alpha")
    alpha = alphas[0]
    if args.window < 1 or args.window % 2 == 0:
        raise UsageError(f"--window must be odd and >= 1, got {args.window}")
    _check_overwrite([args.output], args.force)
    groups = group_by_axis(read_records(args.input))
    lookup = _load_calibrators(args, alphas, groups) if args.baseline == "conformal" else None

    points_by_axis = []
    for axis in groups:
        records = groups[axis]
        intervals = _intervals_for(records, axis, alpha, args.baseline, lookup)
        points_by_axis.append((axis, ordered_plot_data(records, intervals, args.window)))
    write_plot_data(
        points_by_axis,
        args.output,
        meta={"alpha": _fmt(alpha), "window": str(args.window), "baseline": args.baseline},
    )
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"calconform: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, OSError) as exc:
        print(f"calconform: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
