"""Command-line interface.

Commands: ``coeffs``, ``test``, ``critical``, ``simulate``, ``exact``.
Exit codes: 0 success, 2 input/validation error, 3 validity-rule violation
(or an unsolvable correction) without ``--force``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from .correction import CorrectedDistribution, corrected_critical, run_test
from .cumulants import coefficients
from .errors import GofError, NoRootInBracket, ValidityError
from .exact import enumerate_exact
from .model import validate_model
from .montecarlo import comparison_grid, compare, histogram, simulate

log = logging.getLogger("gofcorr")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDITY = 3

PRESETS = {
    "fig1": ("geometric:5:3", 20),
    "fig2": ("geometric:10:5", 12),
    "fig3": ("geometric:15:5", 10),
    "fig4": ("geometric:15:4", 15),
}

TEST_FIELDS = (
    "t_value", "dof", "p_plain", "p_corrected", "B", "C", "validity",
    "alpha", "reject_plain", "reject_corrected", "warnings",
)
COEFF_FIELDS = ("k", "n", "Q", "B", "C", "threshold", "valid")
CRITICAL_FIELDS = ("k", "n", "alpha", "B", "C", "valid", "plain", "corrected", "error")
SIM_TAIL_FIELDS = (
    "alpha", "critical_plain", "critical_corrected", "plain_rejection_rate",
    "corrected_rejection_rate", "sup_dist_plain", "sup_dist_corrected",
)
PLOT_FIELDS = ("t", "empirical_density", "chi2_pdf", "corrected_pdf")


class InputError(GofError):
    pass


def uniform_probs(k: int) -> np.ndarray:
    if k < 2:
        raise InputError(f"uniform preset needs k >= 2, got {k}")
    return np.full(k, 1.0 / k)


def geometric_probs(k: int, ratio: float) -> np.ndarray:
    """``p_i`` proportional to ``r**i`` with ``p_max / p_min = ratio``."""
    if k < 2:
        raise InputError(f"geometric preset needs k >= 2, got {k}")
    if not ratio > 0:
        raise InputError(f"geometric ratio must be positive, got {ratio}")
    r = ratio ** (1.0 / (k - 1))
    w = r ** np.arange(k)
    return w / w.sum()


def _parse_row(text: str, what: str):
    rows = [r for r in csv.reader(io.StringIO(text)) if any(f.strip() for f in r)]
    if len(rows) != 1:
        raise InputError(f"{what} must be a single CSV row, found {len(rows)} rows")
    return [f.strip() for f in rows[0]]


def _read_source(spec: str) -> str:
    path = Path(spec)
    if path.is_file():
        return path.read_text()
    return spec


def parse_probs(spec: str) -> np.ndarray:
    """``uniform:k``, ``geometric:k:ratio``, a CSV file, or an inline CSV row."""
    head, _, rest = spec.partition(":")
    try:
        if head == "uniform":
            return uniform_probs(int(rest))
        if head == "geometric":
            k, ratio = rest.split(":")
            return geometric_probs(int(k), float(ratio))
    except ValueError as exc:
        if isinstance(exc, GofError):
            raise
        raise InputError(f"malformed preset {spec!r}") from None
    values = []
    for i, field in enumerate(_parse_row(_read_source(spec), "probabilities"), start=1):
        try:
            v = float(field)
        except ValueError:
            raise InputError(f"probability entry {i} ({field!r}) is not a number") from None
        if not math.isfinite(v):
            raise InputError(f"probability entry {i} ({field!r}) is not finite")
        values.append(v)
    return np.array(values)


def parse_counts(spec: str) -> list[int]:
    out = []
    for i, field in enumerate(_parse_row(_read_source(spec), "counts"), start=1):
        try:
            out.append(int(field))
        except ValueError:
            raise InputError(f"count entry {i} ({field!r}) is not an integer") from None
    return out


def _sig(x):
    """Round floats to 12 significant digits for output."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(f"{x:.12g}") if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _sig(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_sig(v) for v in x]
    return x


def _cell(x):
    x = _sig(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, list):
        return "; ".join(str(v) for v in x)
    if x is None:
        return ""
    return str(x)


def emit_json(obj, out):
    out.write(json.dumps(_sig(obj), allow_nan=False) + "\n")


def emit_csv(fields, rows, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        w.writerow([_cell(row.get(f)) for f in fields])


def emit(args, obj, fields, rows=None):
    if args.format == "json":
        emit_json(obj, sys.stdout)
    else:
        emit_csv(fields, rows if rows is not None else [obj], sys.stdout)


def build_model(args, n=None):
    probs_spec, preset_n = None, None
    if args.preset:
        probs_spec, preset_n = PRESETS[args.preset]
    if args.probs:
        probs_spec = args.probs
    if probs_spec is None:
        raise InputError("--probs or --preset is required")
    n = args.n if args.n is not None else (preset_n if preset_n is not None else n)
    if n is None:
        raise InputError("--n is required")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model = validate_model(parse_probs(probs_spec), n)
    for w in caught:
        log.warning("%s", w.message)
    return model


def _correction(args, model):
    if args.zero_correction:
        return CorrectedDistribution(model.k, 0.0, 0.0)
    return CorrectedDistribution.from_model(model)


def cmd_coeffs(args) -> int:
    c = coefficients(build_model(args))
    emit(args, c.as_dict(), COEFF_FIELDS)
    return EXIT_OK


def cmd_test(args) -> int:
    counts = parse_counts(args.counts)
    model = build_model(args, n=sum(counts))
    if sum(counts) != model.n:
        raise InputError(f"counts sum to {sum(counts)}, but n is {model.n}")
    report = run_test(model, counts, alpha=args.alpha)
    emit(args, report.as_dict(), TEST_FIELDS)
    if not report.validity and not args.force:
        for note in report.warnings:
            print(f"warning: {note}", file=sys.stderr)
        return EXIT_VALIDITY
    return EXIT_OK


def cmd_critical(args) -> int:
    model = build_model(args)
    dist = _correction(args, model)
    plain = float(dist.chi2.quantile(1 - args.alpha))
    result = {
        "k": model.k, "n": model.n, "alpha": args.alpha, "B": dist.B, "C": dist.C,
        "valid": dist.valid, "plain": plain, "corrected": None, "error": None,
    }
    code = EXIT_OK
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result["corrected"] = corrected_critical(dist, args.alpha, force=args.force)
        for w in caught:
            log.warning("%s", w.message)
    except (ValidityError, NoRootInBracket) as exc:
        result["error"] = str(exc)
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_VALIDITY
    emit(args, result, CRITICAL_FIELDS)
    return code


def cmd_simulate(args) -> int:
    model = build_model(args)
    if args.samples < 1:
        raise InputError(f"--samples must be positive, got {args.samples}")
    if args.workers < 1:
        raise InputError(f"--workers must be positive, got {args.workers}")
    if args.bins < 1:
        raise InputError(f"--bins must be positive, got {args.bins}")
    log.info("simulating %d samples of T (k=%d, n=%d)", args.samples, model.k, model.n)
    emp = simulate(model, args.samples, seed=args.seed, workers=args.workers)

    if args.plotdata:
        dist = _correction(args, model)
        upper = float(comparison_grid(dist.dof)[-1])
        rows = []
        for t, dens in histogram(emp, args.bins, upper):
            rows.append({
                "t": t,
                "empirical_density": dens,
                "chi2_pdf": float(dist.chi2.pdf(t)),
                "corrected_pdf": dist.pdf(t),
            })
        emit_csv(PLOT_FIELDS, rows, sys.stdout)
        return EXIT_OK

    report = compare(emp, model, correction=_correction(args, model)).as_dict()
    report.update(k=model.k, n=model.n)
    rows = [
        dict(tail, sup_dist_plain=report["sup_dist_plain"], sup_dist_corrected=report["sup_dist_corrected"])
        for tail in report["tail_errors"]
    ]
    emit(args, report, SIM_TAIL_FIELDS, rows)
    return EXIT_OK


def cmd_exact(args) -> int:
    model = build_model(args)
    dist = enumerate_exact(model)
    summary = {
        "k": model.k, "n": model.n, "outcomes": dist.outcomes,
        "atom_count": len(dist), "mean": dist.mean(), "expected_mean": model.k - 1,
    }
    if args.format == "json":
        emit_json(dict(summary, atoms=[list(a) for a in dist.atoms]), sys.stdout)
    else:
        for key, value in summary.items():
            sys.stdout.write(f"# {key}={_cell(value)}\n")
        emit_csv(("t", "prob"), [{"t": t, "prob": p} for t, p in dist.atoms], sys.stdout)
    return EXIT_OK


def _alpha(text):
    a = float(text)
    if not 0.0 < a <= 0.5:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 0.5], got {text}")
    return a


def _seed(text):
    s = int(text)
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return s


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--probs", help="uniform:K, geometric:K:RATIO, a CSV file, or an inline CSV row")
    common.add_argument("--n", type=int, help="sample size")
    common.add_argument("--preset", choices=sorted(PRESETS), help="named (k, n) regime (sets --probs and --n)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--force", action="store_true", help="proceed past the 0.15k validity rule")

    parser = argparse.ArgumentParser(prog="gofcorr", description="1/n-corrected chi-square goodness-of-fit test")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("coeffs", parents=[common], help="correction coefficients B, C, Q")

    p = sub.add_parser("test", parents=[common], help="run the test on observed counts")
    p.add_argument("--counts", required=True, help="CSV file or inline CSV row of counts")
    p.add_argument("--alpha", type=_alpha, default=0.05)

    zero = argparse.ArgumentParser(add_help=False)
    zero.add_argument("--zero-correction", action="store_true", help="force B = C = 0 (degenerate model)")

    p = sub.add_parser("critical", parents=[common, zero], help="plain and corrected critical values")
    p.add_argument("--alpha", type=_alpha, default=0.05)

    p = sub.add_parser("simulate", parents=[common, zero], help="Monte Carlo null distribution of T")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--plotdata", action="store_true", help="emit histogram and both densities as CSV")

    sub.add_parser("exact", parents=[common], help="exact distribution of T by enumeration")
    return parser


COMMANDS = {
    "coeffs": cmd_coeffs,
    "test": cmd_test,
    "critical": cmd_critical,
    "simulate": cmd_simulate,
    "exact": cmd_exact,
}


def main(argv=None) -> int:
    level = os.environ.get("GOF_LOG", "WARNING").upper()
    logging.basicConfig(
        level=level if isinstance(logging.getLevelName(level), int) else "WARNING",
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    args = make_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (GofError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
