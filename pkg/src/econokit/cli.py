"""``econokit`` command line: run rounds, single ADF tests and impulse responses.

Exit status: 0 success, 1 analysis error, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from datetime import date, timedelta
from pathlib import Path

from econokit.errors import ConfigError, DataError, EconokitError
from econokit.report import (FORMATS, adf_table, adf_to_dict, finite_or_none, irf_csv, render,
                             to_json, write_atomic)
from econokit.series import VARIABLES, align_calendar, growth_rate, load_series
from econokit.study import (ROUND_IDS, check_coverage, load_config, parse_ordering, run_round)
from econokit.unitroot import AdfSpec, adf_test

EXIT_OK, EXIT_ANALYSIS, EXIT_USAGE = 0, 1, 2

DATA_FILES = {"growthc": "cases.csv", "gsensex": "sensex.csv", "gex": "fx.csv"}


class UsageError(Exception):
    pass


def _precision(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("precision must be >= 1")
    return value


def _lag(text: str) -> int | None:
    if text.lower() == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'auto' or a non-negative integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError("expected 'auto' or a non-negative integer")
    return value


def _window(text: str) -> tuple[date, date]:
    try:
        a, b = text.split(":")
        start, end = date.fromisoformat(a), date.fromisoformat(b)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid window {text!r}; expected YYYY-MM-DD:YYYY-MM-DD") from None
    if end < start:
        raise argparse.ArgumentTypeError("window end precedes its start")
    return start, end


def _variable(text: str) -> str:
    name = text.lower()
    if name not in VARIABLES:
        raise argparse.ArgumentTypeError(
            f"unknown variable {text!r}; valid names: {', '.join(VARIABLES)}")
    return name


def _positive_fraction(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("threshold must lie in (0, 1)")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="econokit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data", type=Path, default=Path("."),
                        help="directory holding cases.csv, sensex.csv and fx.csv")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--precision", type=_precision, default=6)
    common.add_argument("--config", type=Path, default=None,
                        help="INI config file (default: $ECONOKIT_CONFIG, else built-in)")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--var-lags", type=int, default=None)
    model.add_argument("--ordering", default=None, help="Cholesky ordering, e.g. growthc,gsensex,gex")
    model.add_argument("--horizons", "-H", type=int, default=None)
    model.add_argument("--threshold", type=_positive_fraction, default=None,
                       help="return band as a fraction of the peak response")

    p = sub.add_parser("run", parents=[common, model], help="run one round or all rounds")
    p.add_argument("--round", required=True, choices=ROUND_IDS + ("all",))
    p.add_argument("--out", type=Path, default=Path("reports"))
    p.add_argument("--jobs", type=int, default=1, help="rounds to run in parallel")

    p = sub.add_parser("adf", parents=[common], help="augmented Dickey-Fuller test")
    p.add_argument("--series", required=True, type=_variable)
    p.add_argument("--window", required=True, type=_window)
    p.add_argument("--det", choices=("none", "const", "trend"), default="const")
    p.add_argument("--lag", type=_lag, default=None)
    p.add_argument("--maxlag", type=_lag, default=None)
    p.add_argument("--diff", type=int, choices=(0, 1, 2), default=0,
                   help="test the d-th difference of the growth rate")

    p = sub.add_parser("irf", parents=[common, model], help="impulse response of one pair")
    p.add_argument("--round", required=True, choices=ROUND_IDS)
    p.add_argument("--impulse", required=True, type=_variable)
    p.add_argument("--response", required=True, type=_variable)
    return parser


def _load_data(data_dir: Path) -> dict:
    missing = [f for f in DATA_FILES.values() if not (data_dir / f).is_file()]
    if missing:
        raise UsageError(f"missing data file(s) in {data_dir}: {', '.join(missing)}")
    return {v: load_series(data_dir / f, v) for v, f in DATA_FILES.items()}


def _round_config(args, round_id: str, config: dict):
    cfg = config[round_id]
    kw = {}
    if getattr(args, "var_lags", None) is not None:
        if args.var_lags < 1:
            raise UsageError("--var-lags must be >= 1")
        kw["var_lags"] = args.var_lags
    if getattr(args, "ordering", None):
        try:
            kw["ordering"] = parse_ordering(args.ordering)
        except ConfigError as exc:
            raise UsageError(str(exc)) from None
    if getattr(args, "horizons", None) is not None:
        if args.horizons < 0:
            raise UsageError("--horizons must be >= 0")
        kw["horizons"] = args.horizons
    if getattr(args, "threshold", None) is not None:
        kw["threshold"] = args.threshold
    return replace(cfg, **kw) if kw else cfg


def _extension(kind: str) -> str:
    return {"table": "txt", "json": "json", "csv": "csv"}[kind]


def cmd_run(args) -> int:
    data = _load_data(args.data)
    config = load_config(args.config)
    rounds = list(ROUND_IDS) if args.round == "all" else [args.round]
    cfgs = {r: _round_config(args, r, config) for r in rounds}

    def one(rid):
        return run_round(rid, data["growthc"], data["gsensex"], data["gex"], cfgs[rid])

    if args.jobs > 1 and len(rounds) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = {rid: pool.submit(one, rid) for rid in rounds}
        outcomes = {}
        for rid, fut in futures.items():
            try:
                outcomes[rid] = fut.result()
            except EconokitError as exc:
                outcomes[rid] = exc
    else:
        outcomes = {}
        for rid in rounds:
            try:
                outcomes[rid] = one(rid)
            except EconokitError as exc:
                outcomes[rid] = exc

    status = EXIT_OK
    for rid in rounds:
        outcome = outcomes[rid]
        if isinstance(outcome, Exception):
            print(f"round {rid}: {type(outcome).__name__}: {outcome}", file=sys.stderr)
            status = max(status, EXIT_USAGE if isinstance(outcome, DataError) else EXIT_ANALYSIS)
            continue
        path = args.out / f"round_{rid}.{_extension(args.format)}"
        write_atomic(path, render(outcome, args.format, args.precision))
        print(f"wrote {path}")
        if outcome.errors:
            for e in outcome.errors:
                print(f"round {rid}: {e['stage']}: {e['error']}: {e['message']}", file=sys.stderr)
            status = max(status, EXIT_ANALYSIS)
    return status


def cmd_adf(args) -> int:
    data = _load_data(args.data)
    start, end = args.window
    level = data[args.series]
    check_coverage(level, start - timedelta(days=1), end)
    g = growth_rate(align_calendar(level, start - timedelta(days=1), end), args.series)
    maxlag = args.maxlag if args.lag is None else None
    spec = AdfSpec(args.det, args.lag, maxlag)
    res = adf_test(g, spec, diff=args.diff, name=args.series)
    if args.format == "json":
        sys.stdout.write(to_json({"schema_version": "1.0", **adf_to_dict(res, g.dates)}))
    elif args.format == "csv":
        rows = ["key,value", f"t_statistic,{res.statistic!r}", f"p_value,{res.pvalue!r}"]
        rows += [f"cv_{int(round(k * 100))}pct,{v!r}" for k, v in res.critical_values.items()]
        rows += [f"lag,{res.lag}", f"n_obs,{res.nobs}"]
        sys.stdout.write("\n".join(rows) + "\n")
    else:
        sys.stdout.write("\n".join(adf_table(res, args.precision, g.dates)) + "\n")
    return EXIT_OK


def cmd_irf(args) -> int:
    data = _load_data(args.data)
    config = load_config(args.config)
    cfg = _round_config(args, args.round, config)
    # only the VAR and its responses are needed
    cfg = replace(cfg, regressions=(), lm_max_lag=0, lag_order_max=0)
    report = run_round(args.round, data["growthc"], data["gsensex"], data["gex"], cfg)
    if not report.irf:
        for e in report.errors:
            print(f"{e['stage']}: {e['error']}: {e['message']}", file=sys.stderr)
        return EXIT_ANALYSIS
    labels = {v: report.frame.column_label(v) for v in VARIABLES}
    result = report.irf[(labels[args.impulse], labels[args.response])]
    if args.format == "json":
        sys.stdout.write(json.dumps({
            "schema_version": "1.0", "round": args.round, "impulse": result.impulse,
            "response": result.response, "threshold": cfg.threshold,
            "values": [finite_or_none(v) for v in result.values],
            "return_horizon": finite_or_none(result.return_horizon),
        }, indent=2) + "\n")
    elif args.format == "csv":
        sys.stdout.write(irf_csv(result))
    else:
        print(f"Response of {result.response} to a Cholesky one s.d. shock in {result.impulse}")
        print(f"{'horizon':>8}{'response':>{args.precision + 10}}")
        for h, v in enumerate(result.values):
            print(f"{h:>8}{format(float(v), f'.{args.precision}f'):>{args.precision + 10}}")
        rh = result.return_horizon
        print(f"return horizon ({cfg.threshold:g} x peak): "
              f"{'NA' if rh is None else format(rh, '.2f')}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "adf": cmd_adf, "irf": cmd_irf}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError, DataError, OSError) as exc:
        print(f"econokit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EconokitError as exc:
        print(f"econokit: analysis error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())
