"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 degenerate
statistics. Diagnostics go to stderr only.
"""

import argparse
import csv
import io
import logging
import sys

from .errors import BeyondMeanError, DataError, UsageError
from .pipeline import analyze, dataset_to_csv, parse_dataset, render_power_report, render_report
from .simulation import SimulationScenario, pdf_curve, run_power_study, simulate_experiment
from .specfun import BetaParams, beta_from_moments

log = logging.getLogger("beyondmean")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must fit in an unsigned 64-bit integer, got {value}")
    return value


def _n_grid(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid sample-size grid {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="beyondmean", description="Mean and variance analysis of two-arm experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="analyze a CSV dataset")
    p.add_argument("--input", required=True, help="CSV file, or - for stdin")
    p.add_argument("--design", required=True, choices=["between", "within"])
    p.add_argument("--control", help="label of the control arm (default: first label in the file)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--output", help="output file (default: stdout)")

    def moments(p):
        for arm in ("a", "b"):
            p.add_argument(f"--mean-{arm}", type=float, required=True)
            p.add_argument(f"--sd-{arm}", type=float, required=True)

    p = sub.add_parser("simulate", help="draw a between-subjects dataset from two Beta populations")
    moments(p)
    p.add_argument("--n", type=int, required=True, help="scores per arm")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--output", help="output CSV (default: stdout)")

    p = sub.add_parser("power", help="Monte Carlo rejection rates of Brown-Forsythe and the t-test")
    moments(p)
    p.add_argument("--n-grid", type=_n_grid, required=True, help="comma-separated sample sizes per arm")
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["text", "json"], default="json")
    p.add_argument("--output", help="output file (default: stdout)")

    p = sub.add_parser("pdf-curve", help="Beta density on an even grid, as CSV")
    p.add_argument("--alpha-shape", type=float, required=True)
    p.add_argument("--beta-shape", type=float, required=True)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--output", help="output CSV (default: stdout)")
    return parser


def _write(data: bytes, path):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _cmd_analyze(args):
    try:
        if args.input == "-":
            raw = sys.stdin.buffer.read()
        else:
            with open(args.input, "rb") as fh:
                raw = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {args.input}: {exc.strerror}") from None
    dataset = parse_dataset(raw, args.design)
    report = analyze(dataset, alpha=args.alpha, control_label=args.control)
    _write(render_report(report, args.format), args.output)


def _populations(args):
    return beta_from_moments(args.mean_a, args.sd_a), beta_from_moments(args.mean_b, args.sd_b)


def _cmd_simulate(args):
    a, b = _populations(args)
    dataset = simulate_experiment(SimulationScenario(a, b, args.n, args.seed))
    _write(dataset_to_csv(dataset).encode("utf-8"), args.output)


def _cmd_power(args):
    a, b = _populations(args)
    report = run_power_study(a, b, args.n_grid, args.reps, args.alpha, args.seed, workers=args.workers)
    _write(render_power_report(report, args.format), args.output)


def _cmd_pdf_curve(args):
    curve = pdf_curve(BetaParams(args.alpha_shape, args.beta_shape), args.points)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["x", "density"])
    for x, density in curve:
        writer.writerow([repr(x), repr(density)])
    _write(out.getvalue().encode("utf-8"), args.output)


_COMMANDS = {
    "analyze": _cmd_analyze,
    "simulate": _cmd_simulate,
    "power": _cmd_power,
    "pdf-curve": _cmd_pdf_curve,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="%(levelname)s: %(message)s")
    try:
        args = _build_parser().parse_args(argv)
        _COMMANDS[args.command](args)
    except BeyondMeanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
