"""Command-line interface for designing, auditing and applying filters.

Exit codes: 0 success, 1 computation or verification failure, 2 usage
or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .design import FilterCoefficients, FilterSpec, design_coefficients, make_spec
from .metrics import (
    error_reduction_ratio,
    exact_ratios,
    frequency_response,
    moving_average_ratio_approximations,
    ratio_approximations,
    smoothing_parameter,
)
from .smoothing import EDGE_POLICIES, SignalSeries, smooth
from .verify import CERTIFIED_EIGEN_WINDOW, certify, eigenvalues_of_tw
from .weights import WeightVector, custom_weights

WEIGHT_CHOICES = ("constant", "triangular", "quadratic")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    # LinAlgError subclasses ValueError, so computation failures must be
    # picked off before the validation branch.
    except (np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsavgol",
        description="Weighted Savitzky-Golay filter design, metrics and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="design one filter and report its metrics")
    p.add_argument("--window", type=int, required=True, help="odd window length q")
    p.add_argument("--degree", type=int, default=0, help="fitting polynomial degree")
    _add_weight_flags(p)
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--output", default=None, help="output path (default stdout)")
    p.set_defaults(handler=cmd_design)

    p = sub.add_parser("sweep", help="tabulate metrics over a (window, degree, weight) grid")
    p.add_argument("--windows", required=True, help="grid start:stop:step (inclusive) or comma list")
    p.add_argument("--degrees", default="0", help="comma list of degrees")
    p.add_argument("--weights", default="all", help="comma list of weight kinds, or 'all'")
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("verify", help="run the optimality certificate over a grid")
    p.add_argument("--max-window", type=int, default=11, help="largest odd window to certify")
    p.add_argument("--max-degree", type=int, default=4, help="largest basis polynomial degree")
    p.add_argument("--seed", type=int, default=0, help="seed for perturbation trials")
    p.add_argument("--weight-file", default=None,
                   help="check this weight vector instead of the quadratic optimum")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("smooth", help="smooth one CSV column")
    p.add_argument("--input", required=True, help="input CSV path")
    p.add_argument("--column", required=True, help="name of the column to smooth")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--degree", type=int, default=0)
    _add_weight_flags(p)
    p.add_argument("--coeff-file", default=None, help="JSON coefficient document to reuse")
    p.add_argument("--edge", choices=EDGE_POLICIES, default="polyfit")
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_smooth)

    p = sub.add_parser("freqresp", help="frequency response table for one or more weightings")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--degree", type=int, default=0)
    p.add_argument("--weights", default="constant,quadratic", help="comma list of weight kinds")
    p.add_argument("--points", type=int, default=512, help="number of frequency points")
    p.add_argument("--format", choices=("csv", "table", "json"), default="csv")
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_freqresp)

    return parser


def _add_weight_flags(p) -> None:
    p.add_argument("--weight", choices=WEIGHT_CHOICES, default="constant")
    p.add_argument("--weight-file", default=None,
                   help="file of strictly positive weights, one per line")


def _read_weight_file(path: str) -> list[float]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValueError(f"cannot read weight file: {exc}") from None
    values = []
    for token in text.replace(",", " ").split():
        try:
            values.append(float(token))
        except ValueError:
            raise ValueError(f"weight file {path}: {token!r} is not a number") from None
    if not values:
        raise ValueError(f"weight file {path} is empty")
    return values


def _resolve_weight(args, q: int):
    if getattr(args, "weight_file", None):
        return custom_weights(_read_weight_file(args.weight_file))
    return args.weight


def _require_odd_window(q) -> int:
    if q is None:
        raise ValueError("a window length is required")
    if q < 1 or q % 2 == 0:
        raise ValueError(f"window length must be a positive odd integer, got {q}")
    return q


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _use_color() -> bool:
    return sys.stdout.isatty() and "NO_COLOR" not in os.environ


def _status(ok: bool) -> str:
    word = "PASS" if ok else "FAIL"
    if _use_color():
        return f"\x1b[32m{word}\x1b[0m" if ok else f"\x1b[31m{word}\x1b[0m"
    return word


def _render_table(headers, rows) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _coefficient_document(coeffs: FilterCoefficients) -> dict:
    spec = coeffs.spec
    return {
        "q": spec.q,
        "degree": spec.degree,
        "weight_kind": spec.weight.kind,
        "weights": list(spec.weight.values),
        "coefficients": list(coeffs.taps),
        "r": error_reduction_ratio(coeffs),
        "s": smoothing_parameter(coeffs),
    }


def _load_coefficient_document(path: str) -> FilterCoefficients:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read coefficient file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"coefficient file {path} is not valid JSON: {exc}") from None
    try:
        weight = WeightVector(tuple(float(v) for v in doc["weights"]), doc["weight_kind"])
        spec = FilterSpec(q=int(doc["q"]), degree=int(doc["degree"]), weight=weight)
        return FilterCoefficients(tuple(float(v) for v in doc["coefficients"]), spec)
    except KeyError as exc:
        raise ValueError(f"coefficient file {path} lacks field {exc}") from None


def cmd_design(args) -> int:
    q = _require_odd_window(args.window)
    coeffs = design_coefficients(make_spec(q, args.degree, _resolve_weight(args, q)))
    doc = _coefficient_document(coeffs)
    if args.format == "json":
        _emit(json.dumps(doc, indent=2), args.output)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["index", "weight", "coefficient", "r", "s"])
        for i, (w, c) in enumerate(zip(doc["weights"], doc["coefficients"]), start=1):
            writer.writerow([i, repr(w), repr(c), repr(doc["r"]), repr(doc["s"])])
        _emit(buf.getvalue(), args.output)
    else:
        rows = [
            [str(i), f"{w:.6g}", f"{c:.6f}"]
            for i, (w, c) in enumerate(zip(doc["weights"], doc["coefficients"]), start=1)
        ]
        text = (
            f"q={doc['q']} degree={doc['degree']} weight={doc['weight_kind']}\n"
            + _render_table(["index", "weight", "coefficient"], rows)
            + f"r = {doc['r']:.6f}\ns = {doc['s']:.6f}\n"
        )
        _emit(text, args.output)
    return 0


def _parse_int_list(text: str, what: str) -> list[int]:
    items = [t for t in text.split(",") if t.strip()]
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"{what} grid must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (int(p) for p in parts)
        except ValueError:
            raise ValueError(f"{what} grid {text!r} is not numeric") from None
        if step < 1:
            raise ValueError(f"{what} grid step must be >= 1")
        return list(range(start, stop + 1, step))
    try:
        return [int(t) for t in items]
    except ValueError:
        raise ValueError(f"{what} list {text!r} is not numeric") from None


def cmd_sweep(args) -> int:
    windows = sorted(set(_parse_int_list(args.windows, "window")))
    degrees = sorted(set(_parse_int_list(args.degrees, "degree")))
    kinds = (
        list(WEIGHT_CHOICES)
        if args.weights.strip() == "all"
        else [k.strip() for k in args.weights.split(",") if k.strip()]
    )
    for kind in kinds:
        if kind not in WEIGHT_CHOICES:
            raise ValueError(f"unknown weight kind {kind!r}")
    if not windows or not degrees or not kinds:
        raise ValueError("empty sweep grid")
    for q in windows:
        _require_odd_window(q)

    headers = [
        "q", "degree", "weight", "r", "s",
        "r0/r2", "s0/s2", "s0/s1",
        "approx r0/r2", "approx s0/s2", "approx s0/s1",
        "err r0/r2", "err s0/s2", "err s0/s1",
    ]
    records = []
    for q in windows:
        for degree in degrees:
            n = degree // 2 + 1
            ex = exact_ratios(q, n)
            if n == 1:
                ma = moving_average_ratio_approximations(q)
                ap_r, ap_s02 = ma.r0_over_r2, ma.s0_over_s2
            else:
                gen = ratio_approximations(ex.m, n)
                ap_r, ap_s02 = gen.r0_over_r2, gen.s0_over_s2
            ap_s01 = ratio_approximations(ex.m, n).s0_over_s1
            shared = {
                "r0_over_r2": ex.r0_over_r2,
                "s0_over_s2": ex.s0_over_s2,
                "s0_over_s1": ex.s0_over_s1,
                "approx_r0_over_r2": ap_r,
                "approx_s0_over_s2": ap_s02,
                "approx_s0_over_s1": ap_s01,
                "err_r0_over_r2": (ap_r - ex.r0_over_r2) / ex.r0_over_r2,
                "err_s0_over_s2": (ap_s02 - ex.s0_over_s2) / ex.s0_over_s2,
                "err_s0_over_s1": (ap_s01 - ex.s0_over_s1) / ex.s0_over_s1,
            }
            per_kind = {"constant": (ex.r0, ex.s0), "triangular": (ex.r1, ex.s1),
                        "quadratic": (ex.r2, ex.s2)}
            for kind in sorted(kinds):
                r, s = per_kind[kind]
                records.append({"q": q, "degree": degree, "weight": kind,
                                "r": r, "s": s, **shared})

    if args.format == "json":
        _emit(json.dumps(records, indent=2), args.output)
        return 0
    key_order = ["q", "degree", "weight", "r", "s",
                 "r0_over_r2", "s0_over_s2", "s0_over_s1",
                 "approx_r0_over_r2", "approx_s0_over_s2", "approx_s0_over_s1",
                 "err_r0_over_r2", "err_s0_over_s2", "err_s0_over_s1"]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(headers)
        for rec in records:
            writer.writerow([rec["q"], rec["degree"], rec["weight"]]
                            + [repr(rec[k]) for k in key_order[3:]])
        _emit(buf.getvalue(), args.output)
        return 0
    rows = [
        [str(rec["q"]), str(rec["degree"]), rec["weight"]]
        + [f"{rec[k]:.6g}" for k in key_order[3:]]
        for rec in records
    ]
    _emit(_render_table(headers, rows), args.output)
    return 0


def cmd_verify(args) -> int:
    max_q = _require_odd_window(args.max_window)
    if args.max_degree < 0:
        raise ValueError(f"max degree must be >= 0, got {args.max_degree}")
    custom = _read_weight_file(args.weight_file) if args.weight_file else None

    reports = []
    eigen_lines = []
    for q in range(3, max_q + 1, 2):
        m = (q + 1) // 2
        if q <= CERTIFIED_EIGEN_WINDOW:
            eig = eigenvalues_of_tw(q)
            eigen_lines.append((q, eig))
        weight = None
        if custom is not None:
            if len(custom) != q:
                continue  # the injected vector only applies to its own window
            weight = custom
        for n in range(1, min(args.max_degree + 1, m - 1) + 1):
            if n >= m:
                break
            reports.append(certify(q, n, seed=args.seed, weight=weight))
    if not reports:
        raise ValueError("verification grid is empty; raise --max-window or --max-degree")

    all_passed = all(rep.passed for rep in reports)

    if args.format == "json":
        payload = {
            "passed": all_passed,
            "tw_eigenvalues": {str(q): list(e) for q, e in eigen_lines},
            "reports": [
                {
                    "q": rep.q,
                    "n": rep.n,
                    "max_gradient_abs": rep.max_gradient_abs,
                    "min_hessian_eigenvalue": rep.min_hessian_eigenvalue,
                    "perturbation_min_delta": rep.perturbation_min_delta,
                    "max_eigenvalue_rel_error": rep.max_eigenvalue_rel_error,
                    "orthonormality_error": rep.orthonormality_error,
                    "eigen_relation_error": rep.eigen_relation_error,
                    "lambda_min_observed": rep.lambda_min_observed,
                    "lambda_min_formula": rep.lambda_min_formula,
                    "passed": rep.passed,
                }
                for rep in reports
            ],
        }
        _emit(json.dumps(payload, indent=2), args.output)
        return 0 if all_passed else 1

    def fmt(value) -> str:
        return "-" if value is None else f"{value:.3e}"

    rows = [
        [str(rep.q), str(rep.n), fmt(rep.max_gradient_abs),
         fmt(rep.min_hessian_eigenvalue), fmt(rep.perturbation_min_delta),
         fmt(rep.max_eigenvalue_rel_error), fmt(rep.lambda_min_observed),
         fmt(rep.lambda_min_formula), _status(rep.passed)]
        for rep in reports
    ]
    lines = []
    for q, eig in eigen_lines:
        shown = ", ".join(f"{v:.10g}" for v in eig)
        lines.append(f"TW eigenvalues (q={q}): {shown}")
    table = _render_table(
        ["q", "n", "max|grad|", "min eig(H)", "min pert ds",
         "eig err", "lambda_min", "formula", "status"],
        rows,
    )
    failing = [(rep.q, rep.n) for rep in reports if not rep.passed]
    summary = "all checks passed" if all_passed else f"FAILED at (q, n): {failing}"
    _emit("\n".join(lines) + ("\n" if lines else "") + table + summary + "\n", args.output)
    return 0 if all_passed else 1


def cmd_smooth(args) -> int:
    try:
        with open(args.input, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            fieldnames = reader.fieldnames
            rows = list(reader)
    except OSError as exc:
        raise ValueError(f"cannot read input: {exc}") from None
    if not fieldnames:
        raise ValueError(f"input {args.input} has no header row")
    if args.column not in fieldnames:
        raise ValueError(f"column {args.column!r} not found; have {fieldnames}")
    if not rows:
        raise ValueError(f"input {args.input} has no data rows")

    values = []
    for i, row in enumerate(rows, start=1):
        cell = row[args.column]
        try:
            values.append(float(cell))
        except (TypeError, ValueError):
            raise RuntimeError(
                f"row {i}: non-numeric value {cell!r} in column {args.column!r}"
            ) from None

    if args.coeff_file:
        coeffs = _load_coefficient_document(args.coeff_file)
    else:
        q = _require_odd_window(args.window)
        coeffs = design_coefficients(make_spec(q, args.degree, _resolve_weight(args, q)))

    signal = SignalSeries.from_iterable(values)
    result = smooth(signal, coeffs, edge=args.edge)

    out_column = f"{args.column}_smoothed"
    if args.edge == "valid":
        offset = coeffs.spec.evaluation_index - 1
        smoothed = [""] * len(rows)
        for k, v in enumerate(result.values):
            smoothed[offset + k] = repr(v)
    else:
        smoothed = [repr(v) for v in result.values]

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fieldnames) + [out_column])
    writer.writeheader()
    for row, sm in zip(rows, smoothed):
        writer.writerow({**row, out_column: sm})
    _emit(buf.getvalue(), args.output)
    return 0


def cmd_freqresp(args) -> int:
    q = _require_odd_window(args.window)
    if args.points < 2:
        raise ValueError(f"--points must be >= 2, got {args.points}")
    kinds = [k.strip() for k in args.weights.split(",") if k.strip()]
    if args.weights.strip() == "all":
        kinds = list(WEIGHT_CHOICES)
    if not kinds:
        raise ValueError("no weight kinds requested")
    for kind in kinds:
        if kind not in WEIGHT_CHOICES:
            raise ValueError(f"unknown weight kind {kind!r}")

    responses = {}
    omega = None
    for kind in kinds:
        coeffs = design_coefficients(make_spec(q, args.degree, kind))
        resp = frequency_response(coeffs, args.points)
        omega = resp.omega
        responses[kind] = resp.magnitude

    if args.format == "json":
        payload = {"omega": list(omega)}
        payload.update({k: list(v) for k, v in responses.items()})
        _emit(json.dumps(payload, indent=2), args.output)
        return 0
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["omega"] + kinds)
        for i in range(len(omega)):
            writer.writerow([repr(float(omega[i]))] + [repr(float(responses[k][i])) for k in kinds])
        _emit(buf.getvalue(), args.output)
        return 0
    rows = [
        [f"{omega[i]:.6f}"] + [f"{responses[k][i]:.6f}" for k in kinds]
        for i in range(len(omega))
    ]
    _emit(_render_table(["omega"] + kinds, rows), args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
