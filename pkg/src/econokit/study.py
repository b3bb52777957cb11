"""The eight study rounds: windows, per-round settings and the round runner."""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from econokit.errors import ConfigError, CoverageError, DegenerateInputError, EconokitError
from econokit.linreg import OlsFit, fit_ols
from econokit.series import (VARIABLES, DatedSeries, StudyFrame, StudyWindow, build_frame,
                             difference, growth_columns)
from econokit.unitroot import AdfPolicy, AdfResult, AdfSpec, adf_test
from econokit.var import VarFit, fit_var
from econokit.var_diagnostics import (AT_LAG, CUMULATIVE, IrfResult, LagOrderRow, LmTestRow,
                                      cholesky_irf, lag_order_table, lm_serial_test)

CONFIG_ENV = "ECONOKIT_CONFIG"

SECTIONS = ("adf", "regressions", "correlation", "var", "irf", "lm_tests", "lag_order")

_WINDOWS = (
    ("a", date(2020, 3, 25), date(2020, 4, 14), "Lockdown 1.0"),
    ("b", date(2020, 4, 15), date(2020, 5, 3), "Lockdown 2.0"),
    ("c", date(2020, 5, 4), date(2020, 5, 17), "Lockdown 3.0"),
    ("d", date(2020, 5, 18), date(2020, 5, 31), "Lockdown 4.0"),
    ("e", date(2020, 6, 1), date(2020, 6, 30), "Unlock 1.0"),
    ("f", date(2020, 3, 25), date(2020, 6, 30), "Lockdown 1.0 to Unlock 1.0"),
    ("g", date(2020, 3, 11), date(2020, 4, 14), "Pre-lockdown to Lockdown 1.0"),
    ("h", date(2020, 3, 11), date(2020, 6, 30), "Pre-lockdown to Unlock 1.0"),
)

ROUND_IDS = tuple(w[0] for w in _WINDOWS)

# every response regressed on the other two growth rates
ALL_REGRESSIONS = tuple((y, tuple(v for v in VARIABLES if v != y)) for y in VARIABLES)


def round_windows() -> list[StudyWindow]:
    return [StudyWindow(*w) for w in _WINDOWS]


def get_window(round_id: str) -> StudyWindow:
    for w in round_windows():
        if w.id == round_id:
            return w
    raise ConfigError(f"unknown round {round_id!r}; valid rounds: {', '.join(ROUND_IDS)}")


@dataclass(frozen=True)
class RoundConfig:
    window: StudyWindow
    var_lags: int = 1
    adf: Mapping[str, AdfSpec] = field(default_factory=dict)
    regressions: tuple[tuple[str, tuple[str, ...]], ...] = ALL_REGRESSIONS
    lm_max_lag: int = 0
    lag_order_max: int = 0
    published: frozenset = frozenset(SECTIONS)
    horizons: int = 10
    threshold: float = 0.05
    ordering: tuple[str, ...] = VARIABLES


def _adf(growthc: str) -> dict[str, AdfSpec]:
    return {"growthc": AdfSpec(growthc), "gsensex": AdfSpec("none"), "gex": AdfSpec("none")}


_PUBLISHED_SECTIONS = frozenset({"adf", "regressions", "correlation", "var", "irf"})


def default_config() -> dict[str, RoundConfig]:
    w = {x.id: x for x in round_windows()}
    return {
        "a": RoundConfig(w["a"], 1, _adf("const")),
        "b": RoundConfig(w["b"], 1, _adf("const")),
        "c": RoundConfig(w["c"], 1, _adf("const")),
        "d": RoundConfig(w["d"], 1, _adf("trend")),
        "e": RoundConfig(w["e"], 1, _adf("trend"), regressions=(("gsensex", ("gex",)),)),
        "f": RoundConfig(w["f"], 5, _adf("none"), lm_max_lag=6, lag_order_max=8,
                         published=_PUBLISHED_SECTIONS | {"lm_tests", "lag_order"}),
        "g": RoundConfig(w["g"], 1, _adf("const"), regressions=(),
                         published=frozenset({"correlation", "var", "irf"})),
        "h": RoundConfig(w["h"], 4, _adf("none"), regressions=(), lm_max_lag=6, lag_order_max=8,
                         published=frozenset({"adf", "correlation", "var", "irf"})),
    }


def _parse_int_or_auto(text: str, key: str) -> int | None:
    text = text.strip().lower()
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"{key} must be 'auto' or an integer, got {text!r}") from None
    if value < 0:
        raise ConfigError(f"{key} must be >= 0")
    return value


def parse_regressions(text: str) -> tuple[tuple[str, tuple[str, ...]], ...]:
    """``"gsensex: gex; gex: growthc, gsensex"`` -> ((response, regressors), ...)."""
    text = text.strip()
    if text.lower() in ("", "none"):
        return ()
    if text.lower() == "all":
        return ALL_REGRESSIONS
    out = []
    for part in text.split(";"):
        if not part.strip():
            continue
        if ":" not in part:
            raise ConfigError(f"regression {part.strip()!r} must read 'response: x1, x2'")
        y, xs = part.split(":", 1)
        y = y.strip().lower()
        regs = tuple(x.strip().lower() for x in xs.split(",") if x.strip())
        for v in (y, *regs):
            if v not in VARIABLES:
                raise ConfigError(f"unknown variable {v!r}; valid: {', '.join(VARIABLES)}")
        out.append((y, regs))
    return tuple(out)


def parse_ordering(text: str | Sequence[str]) -> tuple[str, ...]:
    items = text.split(",") if isinstance(text, str) else list(text)
    ordering = tuple(x.strip().lower() for x in items if x.strip())
    if sorted(ordering) != sorted(VARIABLES):
        raise ConfigError(f"ordering must be a permutation of {', '.join(VARIABLES)}")
    return ordering


def load_config(path: str | Path | None = None) -> dict[str, RoundConfig]:
    """Defaults, overridden by an INI file.

    Sections ``[defaults]``, ``[round.X]`` and ``[round.X.variable]``; see the
    README for the key list.  ``path=None`` falls back to ``$ECONOKIT_CONFIG``.
    """
    config = default_config()
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return config
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} not found")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    def common(section, cfg: RoundConfig) -> RoundConfig:
        kw = {}
        try:
            if "horizons" in section:
                kw["horizons"] = section.getint("horizons")
            if "threshold" in section:
                kw["threshold"] = section.getfloat("threshold")
        except ValueError as exc:
            raise ConfigError(f"[{section.name}] {exc}") from None
        if "ordering" in section:
            kw["ordering"] = parse_ordering(section["ordering"])
        return replace(cfg, **kw) if kw else cfg

    if parser.has_section("defaults"):
        config = {k: common(parser["defaults"], v) for k, v in config.items()}

    for name in parser.sections():
        if not name.startswith("round."):
            if name != "defaults":
                raise ConfigError(f"{path}: unknown section [{name}]")
            continue
        parts = name.split(".")
        rid = parts[1]
        if rid not in ROUND_IDS:
            raise ConfigError(f"{path}: unknown round in [{name}]")
        section = parser[name]
        cfg = config[rid]
        if len(parts) == 2:
            cfg = common(section, cfg)
            kw = {}
            window = cfg.window
            if "start" in section or "end" in section or "label" in section:
                try:
                    window = StudyWindow(
                        rid,
                        date.fromisoformat(section.get("start", window.start.isoformat())),
                        date.fromisoformat(section.get("end", window.end.isoformat())),
                        section.get("label", window.label),
                    )
                except ValueError as exc:
                    raise ConfigError(f"[{name}] {exc}") from None
                kw["window"] = window
            for key, attr in (("var_lags", "var_lags"), ("lm_max_lag", "lm_max_lag"),
                              ("lag_order_max", "lag_order_max")):
                if key in section:
                    value = _parse_int_or_auto(section[key], key)
                    if value is None:
                        raise ConfigError(f"[{name}] {key} must be an integer")
                    kw[attr] = value
            if "regressions" in section:
                kw["regressions"] = parse_regressions(section["regressions"])
            config[rid] = replace(cfg, **kw)
        elif len(parts) == 3 and parts[2] in VARIABLES:
            spec = cfg.adf.get(parts[2], AdfSpec())
            det = section.get("det", spec.deterministic)
            lag = _parse_int_or_auto(section["lag"], "lag") if "lag" in section else spec.lag
            maxlag = (_parse_int_or_auto(section["maxlag"], "maxlag")
                      if "maxlag" in section else spec.maxlag)
            adf = dict(cfg.adf)
            adf[parts[2]] = AdfSpec(det, lag, maxlag)
            config[rid] = replace(cfg, adf=adf)
        else:
            raise ConfigError(f"{path}: unknown section [{name}]")
    return config


def correlation_matrix(frame: StudyFrame | np.ndarray, names: Sequence[str] = VARIABLES) -> np.ndarray:
    """Pairwise Pearson correlations of the frame's model columns."""
    X = frame.matrix(names) if isinstance(frame, StudyFrame) else np.asarray(frame, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DegenerateInputError("correlation needs at least two observations")
    D = X - X.mean(axis=0)
    ss = np.sqrt((D * D).sum(axis=0))
    if np.any(ss == 0.0):
        raise DegenerateInputError("constant column has no correlation")
    C = (D.T @ D) / np.outer(ss, ss)
    C = np.clip((C + C.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(C, 1.0)
    return C


def summary_statistics(frame: StudyFrame | Mapping[str, DatedSeries], source: str = "growth"
                       ) -> dict[str, dict[str, float]]:
    """Mean and sample standard deviation (n - 1 divisor) per column.

    ``source="growth"`` uses the undifferenced growth rates of a frame,
    ``"columns"`` its model variables.
    """
    if isinstance(frame, StudyFrame):
        cols = frame.growth if source == "growth" else frame.columns
    else:
        cols = frame
    out = {}
    for name, s in cols.items():
        v = np.asarray(getattr(s, "values", s), dtype=float)
        if v.size == 0:
            raise DegenerateInputError(f"{name}: empty column")
        sd = float(v.std(ddof=1)) if v.size > 1 else 0.0
        out[name] = {"mean": float(v.mean()), "sd": sd, "n": int(v.size)}
    return out


@dataclass(frozen=True, eq=False)
class Regression:
    response: str
    regressors: tuple[str, ...]
    dates: tuple[date, ...]
    fit: OlsFit


@dataclass(eq=False)
class RoundReport:
    window: StudyWindow
    config: RoundConfig
    frame: StudyFrame | None = None
    adf: dict[str, list[AdfResult]] = field(default_factory=dict)
    regressions: list[Regression] = field(default_factory=list)
    correlation: np.ndarray | None = None
    summary: dict | None = None
    var: VarFit | None = None
    var_dates: tuple[date, ...] = ()
    irf: dict[tuple[str, str], IrfResult] = field(default_factory=dict)
    lm_tests: dict[str, list[LmTestRow]] = field(default_factory=dict)
    lag_order: list[LagOrderRow] = field(default_factory=list)
    errors: list[dict[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def check_coverage(series: DatedSeries, start: date, end: date, max_gap_days: int = 4) -> None:
    """Raise :class:`CoverageError` naming the dates ``series`` cannot supply."""
    missing = []
    if not len(series) or series.start > start:
        first = series.start if len(series) else end + timedelta(days=1)
        d = start
        while d < min(first, end + timedelta(days=1)):
            missing.append(d)
            d += timedelta(days=1)
    if len(series) and series.end < end - timedelta(days=max_gap_days):
        d = series.end + timedelta(days=1)
        while d <= end:
            missing.append(d)
            d += timedelta(days=1)
    if missing:
        shown = ", ".join(x.isoformat() for x in missing[:5])
        more = f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""
        raise CoverageError(
            f"{series.name}: no data for {shown}{more} needed by window "
            f"{start.isoformat()}..{end.isoformat()}", missing)


def _regression(frame: StudyFrame, transformed: Mapping[str, DatedSeries], response: str,
                regressors: tuple[str, ...]) -> Regression:
    involved = [transformed[v] for v in (response, *regressors)]
    common = sorted(set.intersection(*(set(s.dates) for s in involved)))
    y = transformed[response].restrict(common).values
    X = np.column_stack([transformed[v].restrict(common).values for v in regressors])
    labels = [frame.column_label(v) for v in regressors]
    return Regression(response, regressors, tuple(common), fit_ols(y, X, names=labels))


def run_round(round_id: str, cases: DatedSeries, index: DatedSeries, fx: DatedSeries,
              config: Mapping[str, RoundConfig] | RoundConfig | None = None) -> RoundReport:
    """Run one round end to end.

    Data problems while building the frame raise; failures in any later stage
    are logged in ``report.errors`` and the remaining stages still run.
    """
    if isinstance(config, RoundConfig):
        cfg = config
    else:
        cfg = (config or default_config())[round_id] if round_id in ROUND_IDS else None
        if cfg is None:
            raise ConfigError(f"unknown round {round_id!r}; valid rounds: {', '.join(ROUND_IDS)}")
    window = cfg.window
    for s in (cases, index, fx):
        check_coverage(s, window.start - timedelta(days=1), window.end)

    report = RoundReport(window, cfg)
    policy = AdfPolicy(cfg.adf)
    frame = build_frame(window, cases, index, fx, policy)
    report.frame = frame

    def stage(name, fn):
        try:
            fn()
        except (EconokitError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            report.errors.append({"stage": name, "error": type(exc).__name__, "message": str(exc)})

    def run_adf():
        for name in VARIABLES:
            g = frame.growth[name]
            spec = cfg.adf.get(name, AdfSpec())
            results = [adf_test(g, spec, name=name)]
            if frame.differenced[name]:
                results.append(adf_test(g, spec, diff=1, name=name))
            report.adf[name] = results

    transformed = {
        name: difference(g) if frame.differenced[name] else g for name, g in frame.growth.items()
    }

    def run_regressions():
        for response, regressors in cfg.regressions:
            report.regressions.append(_regression(frame, transformed, response, regressors))

    def run_correlation():
        report.correlation = correlation_matrix(frame)
        report.summary = summary_statistics(frame)

    def run_var():
        names = [frame.column_label(v) for v in VARIABLES]
        report.var = fit_var(frame.matrix(), cfg.var_lags, names)
        report.var_dates = frame.dates[cfg.var_lags:]

    def run_irf():
        if report.var is None:
            raise EconokitError("no VAR fit to compute impulse responses from")
        labels = {v: frame.column_label(v) for v in VARIABLES}
        ordering = [labels[v] for v in cfg.ordering]
        report.irf = cholesky_irf(report.var, cfg.horizons, ordering, cfg.threshold)

    def run_lm():
        if report.var is None:
            raise EconokitError("no VAR fit to test")
        report.lm_tests = {
            mode: [lm_serial_test(report.var, h, mode) for h in range(1, cfg.lm_max_lag + 1)]
            for mode in (AT_LAG, CUMULATIVE)
        }

    def run_lag_order():
        names = [frame.column_label(v) for v in VARIABLES]
        report.lag_order = lag_order_table(frame.matrix(), cfg.lag_order_max, names)

    stage("adf", run_adf)
    stage("regressions", run_regressions)
    stage("correlation", run_correlation)
    stage("var", run_var)
    stage("irf", run_irf)
    if cfg.lm_max_lag > 0:
        stage("lm_tests", run_lm)
    if cfg.lag_order_max > 0:
        stage("lag_order", run_lag_order)
    return report


def pre_lockdown_window() -> StudyWindow:
    """Days before the national lockdown (used for the average-growth summary)."""
    return StudyWindow("pre", date(2020, 3, 11), date(2020, 3, 24), "Pre-lockdown")


def growth_summary(window: StudyWindow, cases: DatedSeries, index: DatedSeries,
                   fx: DatedSeries) -> dict[str, dict[str, float]]:
    return summary_statistics(growth_columns(window, cases, index, fx))
