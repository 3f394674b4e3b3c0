"""Command-line front end: detect on CSVs, simulate builtin models, run benchmarks.

Exit codes: 0 success, 1 series too short for the scanning window,
2 malformed input / unknown model / bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .bench import run_bench, write_bench_outputs
from .pipeline import DetectConfig, detect_changepoints
from .scan import SeriesTooShortError
from .sdtest import OrderMode
from .simulate import builtin_model, builtin_model_names, simulate_piecewise
from .svgplot import series_plot

__all__ = ["main"]


class InputError(Exception):
    """Malformed user input; maps to exit code 2."""


def read_series_csv(path: str, column: str | None = None) -> list[float]:
    """Read one numeric column from a CSV file.

    The header row is optional and auto-detected.  `column` selects by
    header name or 0-based index; without it the file must have exactly
    one column.  Parse failures name the first offending line.
    """
    try:
        with open(path, newline="") as fh:
            rows = [(i, row) for i, row in enumerate(csv.reader(fh), start=1)]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    rows = [(i, row) for i, row in rows if row]
    if not rows:
        raise InputError(f"{path}: no data rows")

    first_line, first = rows[0]
    width = len(first)
    if any(len(row) != width for _, row in rows):
        bad = next(i for i, row in rows if len(row) != width)
        raise InputError(f"{path}: line {bad}: inconsistent number of columns")

    col = 0
    header_names = None
    if column is not None:
        try:
            col = int(column)
        except ValueError:
            header_names = [c.strip() for c in first]
            if column not in header_names:
                raise InputError(
                    f"{path}: no column named {column!r} in header {header_names}"
                ) from None
            col = header_names.index(column)
        if not 0 <= col < width:
            raise InputError(f"{path}: column index {col} out of range (width {width})")
    elif width != 1:
        raise InputError(
            f"{path}: has {width} columns; select one with --column"
        )

    start = 0
    if header_names is not None:
        start = 1  # column selected by name, so the first row is a header
    else:
        try:
            float(first[col])
        except ValueError:
            start = 1  # non-numeric first row: treat as header
    values = []
    for i, row in rows[start:]:
        cell = row[col]
        try:
            values.append(float(cell))
        except ValueError:
            raise InputError(
                f"{path}: line {i}: not a number: {cell.strip()!r}"
            ) from None
    if not values:
        raise InputError(f"{path}: no numeric rows")
    return values


def _detect_config(args) -> DetectConfig:
    if args.order_mode == "bic":
        mode = OrderMode.bic(args.max_order)
    else:
        mode = OrderMode.fixed(args.v)
    return DetectConfig(
        window_radius=args.window,
        scan_order=args.scan_order,
        order_mode=mode,
        correction=args.correction,
        alpha=args.alpha,
        iterate=args.iterate,
    )


def _cmd_detect(args) -> int:
    values = read_series_csv(args.input, args.column)
    try:
        report = detect_changepoints(values, _detect_config(args))
    except SeriesTooShortError as exc:
        print(f"error: series too short: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(report.to_dict(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.plot:
        with open(args.plot, "w", newline="") as fh:
            fh.write(series_plot(values, report.final_cps, title=args.input))
    return 0


def _cmd_simulate(args) -> int:
    spec = builtin_model(args.model)
    x = simulate_piecewise(spec, args.seed)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x"])
        for v in x:
            w.writerow([repr(float(v))])
    sidecar = {
        "schema": 1,
        "model": args.model,
        "seed": args.seed,
        "length": spec.total_length,
        "true_cps": list(spec.true_cps),
        "segments": [
            {
                "ar": list(arma.ar),
                "ma": list(arma.ma),
                "noise_sd": arma.noise_sd,
                "end": end,
            }
            for arma, end in spec.segments
        ],
    }
    with open(args.out + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")
    return 0


def _cmd_bench(args) -> int:
    models: list[str] = []
    for item in args.model or ["A:-0.7", "A:-0.1", "A:0.4", "A:0.7",
                               "B", "C", "D", "E", "F", "G", "H", "I"]:
        models.extend(m.strip() for m in item.split(",") if m.strip())
    for m in models:
        builtin_model(m)  # validate early so bad names exit before any work
    rows = run_bench(models, args.replicates, args.seed, _detect_config(args))
    paths = write_bench_outputs(rows, args.out)
    for r in rows:
        print(
            f"{r.model}\t{r.method}\tR={r.replicates}\t"
            f"rate={r.exact_detection_rate:.4f}"
        )
    for p in paths:
        print(f"wrote {p}")
    return 0


def _add_detect_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-w", "--window", type=int, default=None,
                   help="scanning window radius (default: max(50, ceil(ln T)))")
    p.add_argument("--scan-order", type=int, default=None,
                   help="AR order used by the scan (default: BIC, capped at 10)")
    p.add_argument("--order-mode", choices=["fixed", "bic"], default="fixed",
                   help="order policy of the segment test (default: fixed)")
    p.add_argument("--v", type=float, default=1.5,
                   help="fixed-order exponent, > 1 (default: 1.5)")
    p.add_argument("--max-order", type=int, default=10,
                   help="max order in bic mode (default: 10)")
    p.add_argument("--correction", choices=["bh", "bonferroni"], default="bh",
                   help="multiple-testing correction (default: bh)")
    p.add_argument("--alpha", type=float, default=0.05,
                   help="test level (default: 0.05)")
    p.add_argument("--iterate", action="store_true",
                   help="re-test merged segments until the set is stable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcpd",
        description="Change point detection for piecewise stationary AR time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", help="detect change points in a CSV series")
    d.add_argument("input", help="CSV file with one numeric column")
    d.add_argument("--column", default=None,
                   help="column name or 0-based index (default: the only column)")
    d.add_argument("--out", default=None, help="write the JSON report here")
    d.add_argument("--plot", default=None, help="write an SVG of the series here")
    _add_detect_flags(d)
    d.set_defaults(func=_cmd_detect)

    s = sub.add_parser("simulate", help="simulate a builtin model to CSV")
    s.add_argument("--model", required=True,
                   help=f"one of {', '.join(builtin_model_names())}")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--out", required=True, help="output CSV path")
    s.set_defaults(func=_cmd_simulate)

    b = sub.add_parser("bench", help="detection-rate benchmark over seeded replicates")
    b.add_argument("--model", action="append", default=None,
                   help="model name, repeatable or comma-separated (default: all)")
    b.add_argument("--replicates", type=int, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default="bench_out", help="output directory")
    _add_detect_flags(b)
    b.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
