#!/usr/bin/env python3
"""
Command-line front end

    heavy-tail fit       --input F|DIR --seed S [--models LIST] [--grid N] [--restarts K]
    heavy-tail gof       --input F [--spec F] [--models LIST]
    heavy-tail sample    --spec F --n N --seed S
    heavy-tail qq        --spec F [--levels N]
    heavy-tail curves    --spec F [--points N]
    heavy-tail tailcheck --scenario NAME|--spec F --seed S
    heavy-tail returns   --input F --frequency daily|weekly|monthly

Results go to --out (stdout when omitted). Errors are printed on stdout as a
JSON object and mapped to exit codes: 2 usage, 3 data, 4 numerical failure.
Log messages go to stderr.
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from . import __version__
from .core.analyzer import DEFAULT_MODELS, SeriesAnalyzer, load_spec, parse_models
from .core.base_dist import BaseDistribution
from .core.fitting import FitConfig, QuantileGrid
from .core.generated import GeneratedDistribution
from .core.gof import GofConfig, GofReport, reports_frame, summarize_comparisons
from .core.reporting import RunReport, write_csv, write_json
from .core.tail import TailConfig, run_scenario, run_tail_check, scenario_names
from .exceptions import EXIT_OK, HeavyTailError, IngestionError, OutputError, UsageError
from .utils.file_utils import list_series_files
from .utils.series import Frequency, load_returns

logger = logging.getLogger(__name__)

CURVE_TAIL = 1e-3
TAIL_CHECKS = ("hill", "divergence", "match")


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)


def _resolve_base(args: argparse.Namespace, from_file: Optional[BaseDistribution]):
    if getattr(args, "base", None):
        return BaseDistribution.parse(args.base)
    return from_file or BaseDistribution.gaussian()


def _analyzer(args: argparse.Namespace, spec=None, fit_always: bool = True) -> SeriesAnalyzer:
    fit_config = FitConfig(
        grid=QuantileGrid.uniform(args.grid),
        restarts=args.restarts,
        seed=args.seed if args.seed is not None else 0,
        max_iters=args.max_iters,
    )
    base = BaseDistribution.parse(args.base) if args.base else None
    gof_config = GofConfig(trim=args.trim, bins=args.bins)
    return SeriesAnalyzer(
        args.models, fit_config, gof_config, base=base, spec=spec, fit_always=fit_always
    )


def _analyze_file(
    analyzer: SeriesAnalyzer, path: Path, frequency: str
) -> Tuple[str, Optional[Dict[str, Any]], Optional[List[GofReport]], Optional[Dict[str, Any]]]:
    """Worker body for directory mode; errors are returned, not raised"""
    try:
        report, reports = analyzer.analyze_file(path, frequency)
        return path.stem, report.to_dict(), reports, None
    except HeavyTailError as e:
        return path.stem, None, None, e.to_dict()


def cmd_fit(args: argparse.Namespace) -> int:
    analyzer = _analyzer(args)
    source = Path(args.input)

    if not source.is_dir():
        report, reports = analyzer.analyze_file(source, args.frequency)
        text = report.to_json()
        if args.out:
            report.write(args.out)
        _emit(text, args.out)
        if args.csv:
            write_csv(reports_frame(reports), args.csv)
        return EXIT_OK

    files = list_series_files(str(source))
    out_dir = Path(args.out) if args.out else source / "reports"
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"Cannot create {out_dir}: {e.strerror or e}", path=str(out_dir)) from e

    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = [pool.submit(_analyze_file, analyzer, p, args.frequency) for p in files]
            results = [future.result() for future in futures]
    else:
        results = [_analyze_file(analyzer, p, args.frequency) for p in files]

    exit_code = EXIT_OK
    comparisons = []
    for stem, report_dict, reports, error in results:
        if error is not None:
            logger.warning(f"Series '{stem}' failed: {error['message']}")
            write_json(error, out_dir / f"{stem}.error.json")
            exit_code = max(exit_code, int(error["exit_code"]))
            continue
        RunReport.from_dict(report_dict).write(out_dir / f"{stem}.json")
        comparisons.append(reports)

    summary = summarize_comparisons(comparisons)
    write_csv(summary, out_dir / "summary.csv", index=not summary.empty)
    logger.info(f"Wrote {len(comparisons)} reports to {out_dir}")
    return exit_code


def cmd_gof(args: argparse.Namespace) -> int:
    spec = None
    if args.spec:
        spec, base = load_spec(args.spec)
        if base is not None and not args.base:
            args.base = base.label
    elif "pgml" in args.models and args.seed is None:
        raise UsageError("Fitting pgml needs --seed (or pass a fitted --spec)")
    analyzer = _analyzer(args, spec=spec, fit_always=False)
    report, reports = analyzer.analyze_file(args.input, args.frequency)
    if args.out:
        report.write(args.out)
    _emit(report.to_json(), args.out)
    if args.csv:
        write_csv(reports_frame(reports), args.csv)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    spec, base = load_spec(args.spec)
    dist = GeneratedDistribution(_resolve_base(args, base), spec)
    samples = dist.sample(args.n, args.seed)
    text = write_csv(pd.DataFrame({"sample": samples}), args.out)
    _emit(text, args.out)
    return EXIT_OK


def cmd_qq(args: argparse.Namespace) -> int:
    spec, base = load_spec(args.spec)
    dist = GeneratedDistribution(_resolve_base(args, base), spec)
    levels = QuantileGrid.uniform(args.levels).as_array()
    x, y = dist.qq_points(levels)
    frame = pd.DataFrame({"alpha": levels, "x": x, "y": y})
    _emit(write_csv(frame, args.out), args.out)
    return EXIT_OK


def cmd_curves(args: argparse.Namespace) -> int:
    spec, base = load_spec(args.spec)
    dist = GeneratedDistribution(_resolve_base(args, base), spec)
    matched = dist.matched_gaussian()
    lo, hi = dist.quantile([CURVE_TAIL, 1.0 - CURVE_TAIL])
    ys = np.linspace(float(lo), float(hi), args.points)
    frame = pd.DataFrame(
        {
            "y": ys,
            "cdf": dist.cdf(ys),
            "pdf": dist.pdf(ys),
            "gaussian_cdf": matched.cdf(ys),
            "gaussian_pdf": matched.pdf(ys),
        }
    )
    _emit(write_csv(frame, args.out), args.out)
    return EXIT_OK


def cmd_tailcheck(args: argparse.Namespace) -> int:
    config = TailConfig()
    if args.scenario and args.spec:
        raise UsageError("Pass either --scenario or --spec, not both")
    if args.scenario:
        report = run_scenario(args.scenario, args.seed, args.n, config)
    elif args.spec:
        spec, base = load_spec(args.spec)
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in checks if c not in TAIL_CHECKS]
        if unknown:
            raise UsageError(
                f"Unknown checks {unknown}; valid checks: {', '.join(TAIL_CHECKS)}",
                valid=list(TAIL_CHECKS),
            )
        report = run_tail_check(
            _resolve_base(args, base),
            spec,
            args.n or 1_000_000,
            args.seed,
            checks=checks,
            name=Path(args.spec).stem,
            config=config,
        )
    else:
        raise UsageError(
            "tailcheck needs --scenario or --spec", valid=scenario_names()
        )

    text = write_json(report.to_dict(), args.out)
    _emit(text, args.out)
    if report.ratio_curve:
        ratio_out = args.ratio_out
        if ratio_out is None and args.out:
            ratio_out = str(Path(args.out).with_suffix(".ratio.csv"))
        if ratio_out:
            write_csv(report.ratio_frame(), ratio_out)
    return EXIT_OK


def cmd_returns(args: argparse.Namespace) -> int:
    series = load_returns(args.input, args.frequency)
    frame = pd.DataFrame({"return": series.values})
    _emit(write_csv(frame, args.out), args.out)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="Output file (stdout when omitted)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="Series CSV (return or date,price)")
    parser.add_argument(
        "--models",
        type=parse_models,
        default=list(DEFAULT_MODELS),
        help="Comma-separated subset of normal,laplace,t,pgml",
    )
    parser.add_argument("--frequency", default="daily", choices=[f.value for f in Frequency])
    parser.add_argument("--base", help="Base of the transform: gaussian, exponential or t:DOF")
    parser.add_argument("--grid", type=int, default=99, help="Number of quantile levels")
    parser.add_argument("--restarts", type=int, default=3)
    parser.add_argument("--max-iters", dest="max_iters", type=int, default=5000)
    parser.add_argument("--trim", type=float, default=GofConfig.trim)
    parser.add_argument("--bins", type=int, default=GofConfig.bins)
    parser.add_argument("--csv", help="Also write the comparison table as CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heavy-tail",
        description="Fit, sample and compare heavy-tailed transform distributions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="Fit the transform and baselines to a series")
    _add_model_options(fit)
    fit.add_argument("--seed", type=int, required=True)
    fit.add_argument("--workers", type=int, default=1, help="Parallel series in directory mode")
    _add_common(fit)
    fit.set_defaults(handler=cmd_fit)

    gof = sub.add_parser("gof", help="Goodness-of-fit comparison on a series")
    _add_model_options(gof)
    gof.add_argument("--spec", help="Fitted transform (spec or report JSON)")
    gof.add_argument("--seed", type=int, help="Required when pgml has to be fitted")
    _add_common(gof)
    gof.set_defaults(handler=cmd_gof)

    sample = sub.add_parser("sample", help="Draw samples from a fitted transform")
    sample.add_argument("--spec", required=True)
    sample.add_argument("--n", type=int, required=True)
    sample.add_argument("--seed", type=int, required=True)
    sample.add_argument("--base")
    _add_common(sample)
    sample.set_defaults(handler=cmd_sample)

    qq = sub.add_parser("qq", help="Q-Q points (F^-1(alpha), f(F^-1(alpha)))")
    qq.add_argument("--spec", required=True)
    qq.add_argument("--levels", type=int, default=99)
    qq.add_argument("--base")
    _add_common(qq)
    qq.set_defaults(handler=cmd_qq)

    curves = sub.add_parser("curves", help="CDF and density against the matched Gaussian")
    curves.add_argument("--spec", required=True)
    curves.add_argument("--points", type=int, default=401)
    curves.add_argument("--base")
    _add_common(curves)
    curves.set_defaults(handler=cmd_curves)

    tail = sub.add_parser("tailcheck", help="Tail-index and survival-ratio verification")
    tail.add_argument("--scenario", help=f"One of: {', '.join(scenario_names())}")
    tail.add_argument("--spec")
    tail.add_argument("--base")
    tail.add_argument("--checks", default="hill")
    tail.add_argument("--n", type=int, help="Sample size (scenario default when omitted)")
    tail.add_argument("--seed", type=int, required=True)
    tail.add_argument("--ratio-out", dest="ratio_out", help="Ratio curve CSV")
    _add_common(tail)
    tail.set_defaults(handler=cmd_tailcheck)

    returns = sub.add_parser("returns", help="Log-returns of a price series")
    returns.add_argument("--input", required=True)
    returns.add_argument("--frequency", default="daily", choices=[f.value for f in Frequency])
    _add_common(returns)
    returns.set_defaults(handler=cmd_returns)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the heavy-tail console script; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse reports usage errors itself, with exit code 2
        return int(e.code or 0)

    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except HeavyTailError as e:
        return _report_failure(e)
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        return _report_failure(IngestionError(str(e), cause=type(e).__name__))


def _report_failure(error: HeavyTailError) -> int:
    logger.debug("Command failed", exc_info=True)
    print(json.dumps(error.to_dict(), sort_keys=True))
    return error.exit_code


if __name__ == "__main__":
    sys.exit(main())
