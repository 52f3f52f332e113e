"""Command-line front end.

Three subcommands share the reporting pipeline:

* ``analyze``  -- build the space from a config file and run every check;
* ``simulate`` -- write a seeded, reproducible event CSV plus a summary;
* ``ingest``   -- estimate tables from an event CSV and run the same checks.

Exit codes: 0 success (inequality violations are findings, not errors),
2 parse/schema error, 3 validation error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_config
from .csvio import read_event_csv, write_event_csv
from .errors import (
    BellspaceError,
    ConfigParseError,
    ConfigValidationError,
    CsvSchemaError,
    EmptyStreamError,
    InvalidDistributionError,
)
from .montecarlo import convergence_report, estimate, sample_trials
from .quantum import tsirelson_scan
from .reporting import build_analysis_report, build_simulation_summary, render_json, render_text
from .space import DEFAULT_TOLERANCE, build_space

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4


def _add_common(
    parser: argparse.ArgumentParser,
    *,
    out_help: str = "write the JSON report here",
    out_required: bool = False,
) -> None:
    parser.add_argument(
        "--tolerance",
        type=float,
        default=DEFAULT_TOLERANCE,
        help="absolute comparison tolerance (default %(default)g)",
    )
    parser.add_argument(
        "--exact-lp",
        action="store_true",
        help="decide joint-distribution feasibility in exact rational arithmetic",
    )
    parser.add_argument("--out", type=Path, default=None, required=out_required, help=out_help)
    parser.add_argument(
        "--figures",
        type=Path,
        default=None,
        metavar="DIR",
        help="also render report figures (PNG) into DIR",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellspace",
        description=(
            "Classical probability-space analysis of two-device, two-setting "
            "experiments: exact identities, locality/no-signaling checks, CHSH "
            "bounds, joint-distribution feasibility, and seeded simulation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run all checks on a configured space")
    p.add_argument("--config", type=Path, required=True, help="YAML config file")
    p.add_argument(
        "--grid",
        type=int,
        default=None,
        metavar="N",
        help="also scan |S_cond| over an N-per-dial angle grid",
    )
    _add_common(p)

    p = sub.add_parser("simulate", help="sample trials and write an event CSV")
    p.add_argument("--config", type=Path, required=True, help="YAML config file")
    p.add_argument("--n", type=int, required=True, help="number of trials (>= 1)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--shards", type=int, default=1, help="sampling shards (output-invariant)")
    p.add_argument(
        "--convergence",
        action="store_true",
        help="include an empirical-vs-exact convergence table in the summary",
    )
    _add_common(p, out_help="write the event CSV here", out_required=True)

    p = sub.add_parser("ingest", help="estimate tables from an event CSV and run all checks")
    p.add_argument("csv", type=Path, help="event CSV produced by simulate (or schema-compatible)")
    _add_common(p)

    return parser


def _write_outputs(report: dict, args, scan=None) -> None:
    text = render_text(report)
    if args.out is not None:
        args.out.write_text(render_json(report), encoding="utf-8")
        sys.stdout.write(text)
    else:
        sys.stdout.write(text)
    if args.figures is not None:
        from .figures import render_report_figures

        paths = render_report_figures(report, args.figures, scan=scan)
        sys.stdout.write("figures: " + ", ".join(str(p) for p in paths) + "\n")


def _cmd_analyze(args) -> int:
    cfg = load_config(args.config, tolerance=args.tolerance)
    scan = None
    if args.grid is not None:
        if args.grid < 2:
            raise ConfigValidationError(f"--grid must be >= 2, got {args.grid}")
        scan = tsirelson_scan(args.grid)
    report = build_analysis_report(
        cfg.settings,
        cfg.table,
        tolerance=args.tolerance,
        exact_lp=args.exact_lp,
        mode="analyze",
        scan=scan,
    )
    _write_outputs(report, args, scan=scan)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    if args.n < 1:
        raise ConfigValidationError(f"--n must be >= 1, got {args.n}")
    if args.shards < 1:
        raise ConfigValidationError(f"--shards must be >= 1, got {args.shards}")
    cfg = load_config(args.config, tolerance=args.tolerance)
    space = build_space(cfg.settings, cfg.table)

    trials = sample_trials(space, args.n, args.seed, shards=args.shards)
    write_event_csv(args.out, trials)

    est = estimate(trials)
    convergence = None
    if args.convergence:
        steps = [n for n in (100, 1000, 10_000, 100_000, 1_000_000) if n <= args.n]
        if not steps or steps[-1] != args.n:
            steps.append(args.n)
        convergence = convergence_report(space, steps, args.seed)
    summary = build_simulation_summary(space, trials, est, convergence)
    report = build_analysis_report(
        cfg.settings,
        cfg.table,
        tolerance=args.tolerance,
        exact_lp=args.exact_lp,
        mode="simulate",
        simulation=summary,
    )
    # --out holds the CSV; the JSON report goes alongside it
    report_path = args.out.with_suffix(args.out.suffix + ".report.json")
    report_path.write_text(render_json(report), encoding="utf-8")
    sys.stdout.write(render_text(report))
    sys.stdout.write(f"events: {args.out}\nreport: {report_path}\n")
    if args.figures is not None:
        from .figures import render_report_figures

        paths = render_report_figures(report, args.figures)
        sys.stdout.write("figures: " + ", ".join(str(p) for p in paths) + "\n")
    return EXIT_OK


def _cmd_ingest(args) -> int:
    trials = read_event_csv(args.csv)
    est = estimate(trials)
    table = est.table(fill_undefined=True)
    report = build_analysis_report(
        est.settings,
        table,
        tolerance=args.tolerance,
        exact_lp=args.exact_lp,
        mode="ingest",
        empirical=est,
    )
    _write_outputs(report, args)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        return _cmd_ingest(args)
    except (ConfigParseError, CsvSchemaError, EmptyStreamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigValidationError, InvalidDistributionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except BellspaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
