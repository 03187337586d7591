"""Command-line front end: fit, predict, plotdata, and the eclipse demo.

Exit codes: 0 success, 1 usage error, 2 data error (I/O, parse, validation),
3 when the fit stalled with no improving candidate before reaching the SS
target (outputs are still written).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

from . import eclipse
from .basis import BasisFamily, FrequencyBand, InputTransform, span2pi_transform
from .dataset import Dataset, DatasetError, LengthMismatchError, collapse_duplicates, validate_dataset, weighted_ss
from .fitter import (
    STOP_NO_CANDIDATE,
    FitConfig,
    FitReport,
    TooFewPointsError,
    fit,
)
from .model import ParseError, SeriesModel, UnsupportedVersionError, deserialize, serialize, serialize_report

__all__ = ["main", "entrypoint", "read_dataset_csv"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_STALLED = 3


class _UsageError(Exception):
    pass


class _DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise _UsageError(message)


def read_dataset_csv(path: str, header: bool = False) -> Dataset:
    """Read ``x,y`` or ``x,y,w`` rows; weights default to 1."""
    xs: list[float] = []
    ys: list[float] = []
    ws: list[float] = []
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            for lineno, row in enumerate(reader, start=1):
                if header and lineno == 1:
                    continue
                if not row or (len(row) == 1 and not row[0].strip()):
                    continue
                if len(row) not in (2, 3):
                    raise _DataError(f"{path}:{lineno}: expected 2 or 3 columns, got {len(row)}")
                try:
                    xs.append(float(row[0]))
                    ys.append(float(row[1]))
                    ws.append(float(row[2]) if len(row) == 3 else 1.0)
                except ValueError as exc:
                    raise _DataError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise _DataError(f"cannot read {path}: {exc}") from exc
    if not xs:
        raise _DataError(f"{path}: no data rows")
    return Dataset(xs, ys, ws)


def _read_x_values(path: str, header: bool) -> list[float]:
    values: list[float] = []
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            for lineno, row in enumerate(reader, start=1):
                if header and lineno == 1:
                    continue
                if not row or not row[0].strip():
                    continue
                try:
                    values.append(float(row[0]))
                except ValueError as exc:
                    raise _DataError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise _DataError(f"cannot read {path}: {exc}") from exc
    return values


def _load_model(path: str) -> SeriesModel:
    try:
        with open(path, encoding="utf-8") as handle:
            return deserialize(handle.read())
    except OSError as exc:
        raise _DataError(f"cannot read {path}: {exc}") from exc
    except (ParseError, UnsupportedVersionError) as exc:
        raise _DataError(f"{path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise _DataError(f"cannot write {path}: {exc}") from exc


def _print_trajectory(report: FitReport) -> None:
    with_val = report.initial_validation_ss is not None
    head = "iter  beta  alpha  train_ss" + ("  validation_ss" if with_val else "")
    print(head)
    initial = f"0  -  -  {report.initial_ss}"
    if with_val:
        initial += f"  {report.initial_validation_ss}"
    print(initial)
    for rec in report.records:
        line = f"{rec.index}  {rec.beta}  {rec.alpha}  {rec.train_ss}"
        if with_val:
            line += f"  {rec.validation_ss}"
        print(line)
    print(f"stop_reason: {report.stop_reason}")


def _transform_for(name: str, d: Dataset) -> InputTransform:
    if name == "identity":
        return InputTransform()
    try:
        return span2pi_transform(d)
    except ValueError as exc:
        raise _DataError(str(exc)) from exc


def _cmd_fit(args) -> int:
    d = read_dataset_csv(args.input, header=args.header)
    if args.collapse_duplicates:
        d = collapse_duplicates(d)
    validate_dataset(d)
    family = BasisFamily(args.family, _transform_for(args.transform, d))
    cfg = FitConfig(
        band=FrequencyBand(args.beta_min, args.beta_max, args.beta_grid),
        refine_steps=args.refine,
        max_iterations=args.max_iters,
        ss_target=args.ss_target,
        min_relative_decrease=args.min_decrease,
        validation_fraction=args.validation,
        validation_patience=args.patience,
        seed=args.seed,
        family=family,
        base_kind=args.base,
    )
    model, report = fit(d, cfg)
    _write_text(args.out, serialize(model))
    _write_text(args.report, serialize_report(report))
    _print_trajectory(report)
    print(f"model written to {args.out}; report written to {args.report}")
    stalled = report.stop_reason == STOP_NO_CANDIDATE and report.final_ss > cfg.ss_target
    return EXIT_STALLED if stalled else EXIT_OK


def _cmd_predict(args) -> int:
    model = _load_model(args.model)
    if args.x is not None:
        text = args.x.strip()
        try:
            xs = [float(tok) for tok in text.split(",")] if text else []
        except ValueError as exc:
            raise _DataError(f"bad inline x values: {exc}") from exc
    elif args.input is not None:
        xs = _read_x_values(args.input, args.header)
    else:
        raise _UsageError("predict needs --input or --x")
    preds = model.predict_many(xs) if xs else []
    lines = []
    for x, yhat in zip(xs, preds):
        shown = str(math.trunc(yhat)) if args.round else str(float(yhat))
        lines.append(f"{float(x)},{shown}")
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_plotdata(args) -> int:
    model = _load_model(args.model)
    d = read_dataset_csv(args.input, header=args.header)
    validate_dataset(d)
    fitted = model.predict_many(d.x)
    lines = ["x,actual,fitted,residual"]
    for x, y, f in zip(d.x, d.y, fitted):
        lines.append(f"{float(x)},{float(y)},{float(f)},{float(y - f)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_demo_eclipse(args) -> int:
    try:
        data = eclipse.load_eclipse_data()
    except (OSError, ValueError) as exc:
        raise _DataError(f"bundled eclipse data unavailable: {exc}") from exc
    train = eclipse.training_dataset(data)
    cfg = eclipse.demo_config(max_iterations=args.max_iters)
    model, report = fit(train, cfg)

    _write_text(args.out, serialize(model))
    _write_text(args.report, serialize_report(report))

    plot_rows = [(c, y) for c, y in zip(train.x, train.y)]
    if args.holdout:
        tail = eclipse.holdout_dataset(data)
        plot_rows += [(c, y) for c, y in zip(tail.x, tail.y)]
    fitted = model.predict_many([c for c, _ in plot_rows])
    lines = ["n,actual,fitted"]
    for (c, y), f in zip(plot_rows, fitted):
        lines.append(f"{int(c)},{int(y)},{float(f)}")
    _write_text(args.plot, "\n".join(lines) + "\n")

    _print_trajectory(report)
    print(f"initial SS {report.initial_ss} -> final SS {report.final_ss} in {len(report.records)} iterations")
    print("six-century groups:")
    for label, group, counts, spread in eclipse.group_summary(data):
        centuries = ", ".join(str(c) for c in group)
        values = " ".join(str(v) for v in counts)
        print(f"  group {label} (centuries {centuries}): {values}  range {spread}")
    lo, hi = eclipse.count_bounds(data)
    print(f"per-century counts span [{lo}, {hi}]")
    print(f"model written to {args.out}; report to {args.report}; plot data to {args.plot}")
    return EXIT_OK


def _add_fit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base", choices=("zero", "constant", "linear"), default="constant")
    p.add_argument("--family", choices=("sine", "cosine"), default="sine")
    p.add_argument("--transform", choices=("identity", "span2pi"), default="identity")
    p.add_argument("--beta-min", type=float, default=0.05)
    p.add_argument("--beta-max", type=float, default=3.2)
    p.add_argument("--beta-grid", type=int, default=1024)
    p.add_argument("--refine", type=int, default=40)
    p.add_argument("--max-iters", type=int, default=25)
    p.add_argument("--ss-target", type=float, default=0.0)
    p.add_argument("--min-decrease", type=float, default=0.0)
    p.add_argument("--validation", type=float, default=0.0)
    p.add_argument("--patience", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> _Parser:
    parser = _Parser(prog="seriesfit", description="Greedy sinusoidal series regression")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a series model to a CSV dataset")
    p_fit.add_argument("--input", required=True, help="CSV with x,y or x,y,w rows")
    p_fit.add_argument("--header", action="store_true", help="skip one header row")
    p_fit.add_argument("--collapse-duplicates", action="store_true")
    _add_fit_flags(p_fit)
    p_fit.add_argument("--out", default="model.json")
    p_fit.add_argument("--report", default="report.json")
    p_fit.set_defaults(func=_cmd_fit)

    p_pred = sub.add_parser("predict", help="evaluate a model at x values")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--input", help="CSV whose first column is x")
    p_pred.add_argument("--x", help="inline comma-separated x values")
    p_pred.add_argument("--header", action="store_true")
    p_pred.add_argument("--round", action="store_true", help="print the integer part")
    p_pred.add_argument("--out")
    p_pred.set_defaults(func=_cmd_predict)

    p_plot = sub.add_parser("plotdata", help="emit x,actual,fitted,residual rows")
    p_plot.add_argument("--model", required=True)
    p_plot.add_argument("--input", required=True)
    p_plot.add_argument("--header", action="store_true")
    p_plot.add_argument("--out")
    p_plot.set_defaults(func=_cmd_plotdata)

    p_demo = sub.add_parser("demo-eclipse", help="reproduce the bundled eclipse-count fit")
    p_demo.add_argument("--out", default="eclipse_model.json")
    p_demo.add_argument("--report", default="eclipse_report.json")
    p_demo.add_argument("--plot", default="eclipse_plot.csv")
    p_demo.add_argument("--max-iters", type=int, default=6)
    p_demo.add_argument("--holdout", action="store_true", help="include post-window centuries in the plot data")
    p_demo.set_defaults(func=_cmd_demo_eclipse)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (_DataError, DatasetError, LengthMismatchError, TooFewPointsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
