"""Serialization of round reports: JSON documents, fixed-width tables, plot-data CSV.

All output is locale independent: numbers go through ``format`` with an
explicit precision, never through locale-aware formatting.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable

import numpy as np

from econokit.linreg import OlsFit
from econokit.series import VARIABLES
from econokit.unitroot import VARIANT_LABELS, AdfResult
from econokit.var import VarFit

SCHEMA_VERSION = "1.0"
FORMATS = ("table", "json", "csv")


def finite_or_none(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _floats(values: Iterable) -> list:
    return [finite_or_none(v) for v in np.asarray(values, dtype=float).ravel()]


def fmt(x, precision: int = 6, width: int = 0) -> str:
    """Fixed-point with ``precision`` decimals; scientific below 1e-4 in magnitude."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        text = "NA"
    elif isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        text = str(int(x))
    else:
        x = float(x)
        if x != 0.0 and abs(x) < 1e-4:
            text = format(x, f".{max(precision - 4, 2)}E")
        else:
            text = format(x, f".{precision}f")
    return text.rjust(width)


def pfmt(p, width: int = 0) -> str:
    """Probabilities always print with four fixed decimals, like the source tables."""
    p = finite_or_none(p)
    return ("NA" if p is None else format(p, ".4f")).rjust(width)


# ---------------------------------------------------------------- dict forms

def ols_to_dict(fit: OlsFit, dates=None) -> dict:
    out = {
        "coefficients": [
            {"variable": n, "coefficient": finite_or_none(b), "std_error": finite_or_none(se),
             "t_statistic": finite_or_none(t), "p_value": finite_or_none(p)}
            for n, b, se, t, p in zip(fit.names, fit.params, fit.bse, fit.tvalues, fit.pvalues)
        ],
        "r_squared": finite_or_none(fit.r_squared),
        "adj_r_squared": finite_or_none(fit.adj_r_squared),
        "se_of_regression": finite_or_none(fit.se_of_regression),
        "sum_squared_resid": finite_or_none(fit.sum_squared_resid),
        "log_likelihood": finite_or_none(fit.log_likelihood),
        "f_statistic": finite_or_none(fit.f_statistic),
        "prob_f": finite_or_none(fit.prob_f),
        "mean_dependent": finite_or_none(fit.mean_dependent),
        "sd_dependent": finite_or_none(fit.sd_dependent),
        "aic": finite_or_none(fit.aic),
        "sc": finite_or_none(fit.sc),
        "hq": finite_or_none(fit.hq),
        "durbin_watson": finite_or_none(fit.durbin_watson),
        "n_obs": fit.n_obs,
    }
    if dates is not None:
        y = fit.fitted + fit.residuals
        out["series"] = {
            "dates": [d.isoformat() for d in dates],
            "actual": _floats(y),
            "fitted": _floats(fit.fitted),
            "residual": _floats(fit.residuals),
        }
    return out


def adf_to_dict(res: AdfResult, dates=None) -> dict:
    sample = None
    if dates is not None:
        sample = [dates[res.sample[0]].isoformat(), dates[res.sample[1]].isoformat()]
    return {
        "series": res.tested_label,
        "exogenous": VARIANT_LABELS[res.deterministic],
        "lag": res.lag,
        "lag_selection": "fixed" if res.maxlag is None else "SIC",
        "maxlag": res.maxlag,
        "t_statistic": finite_or_none(res.statistic),
        "p_value": finite_or_none(res.pvalue),
        "critical_values": {f"{int(round(k * 100))}%": finite_or_none(v)
                            for k, v in res.critical_values.items()},
        "n_obs": res.nobs,
        "sample": sample,
        "regression": ols_to_dict(res.regression),
    }


def var_to_dict(fit: VarFit, dates=None) -> dict:
    return {
        "lags": fit.lags,
        "variables": list(fit.names),
        "regressors": list(fit.regressor_names),
        "sample": [dates[0].isoformat(), dates[-1].isoformat()] if dates else None,
        "equations": {name: ols_to_dict(eq) for name, eq in zip(fit.names, fit.equations)},
        "system": {
            "det_resid_cov_dof_adj": finite_or_none(fit.det_sigma_a),
            "det_resid_cov": finite_or_none(fit.det_sigma_u),
            "log_likelihood": finite_or_none(fit.log_likelihood),
            "aic": finite_or_none(fit.aic),
            "sc": finite_or_none(fit.sc),
            "n_coefficients": fit.n_coefficients,
            "n_obs": fit.nobs,
        },
    }


def report_to_dict(report) -> dict:
    """JSON-ready form of a :class:`~econokit.study.RoundReport`."""
    w = report.window
    cfg = report.config
    frame = report.frame
    out = {
        "schema_version": SCHEMA_VERSION,
        "round": w.id,
        "window": {"start": w.start.isoformat(), "end": w.end.isoformat(), "label": w.label,
                   "days": w.days},
        "published_sections": sorted(cfg.published),
        "variables": {v: frame.column_label(v) for v in VARIABLES} if frame else None,
    }
    if report.adf:
        gdates = frame.growth[VARIABLES[0]].dates
        out["adf"] = {}
        for name, results in report.adf.items():
            entries = []
            for r in results:
                # tests on a difference are indexed into the undifferenced input
                entries.append(adf_to_dict(r, gdates))
            out["adf"][name] = entries
    if report.regressions:
        out["regressions"] = [
            {"response": frame.column_label(r.response),
             "regressors": [frame.column_label(x) for x in r.regressors],
             **ols_to_dict(r.fit, r.dates)}
            for r in report.regressions
        ]
    if report.correlation is not None:
        out["correlation"] = {
            "variables": [frame.column_label(v) for v in VARIABLES],
            "matrix": [_floats(row) for row in report.correlation],
        }
    if report.summary is not None:
        out["summary"] = {k: {"mean": finite_or_none(v["mean"]), "sd": finite_or_none(v["sd"]),
                              "n": v["n"]} for k, v in report.summary.items()}
    if report.var is not None:
        out["var"] = var_to_dict(report.var, report.var_dates)
    if report.irf:
        out["irf"] = {
            "ordering": [frame.column_label(v) for v in cfg.ordering],
            "horizons": cfg.horizons,
            "threshold": cfg.threshold,
            "responses": [
                {"impulse": r.impulse, "response": r.response, "values": _floats(r.values),
                 "return_horizon": finite_or_none(r.return_horizon)}
                for r in report.irf.values()
            ],
        }
    if report.lm_tests:
        out["lm_tests"] = {
            mode: [
                {"lag": r.lag, "lre_stat": finite_or_none(r.lre_stat), "df": r.df,
                 "p_value": finite_or_none(r.pvalue), "rao_f": finite_or_none(r.rao_f),
                 "rao_df": [r.rao_df[0], finite_or_none(r.rao_df[1])],
                 "rao_p_value": finite_or_none(r.rao_pvalue)}
                for r in rows
            ]
            for mode, rows in report.lm_tests.items()
        }
    if report.lag_order:
        out["lag_order"] = [
            {"lag": r.lag, "log_likelihood": finite_or_none(r.loglik), "lr": finite_or_none(r.lr),
             "fpe": finite_or_none(r.fpe), "aic": finite_or_none(r.aic),
             "sc": finite_or_none(r.sc), "hq": finite_or_none(r.hq),
             "selected_by": [c for c, flag in r.stars.items() if flag]}
            for r in report.lag_order
        ]
    out["errors"] = list(report.errors)
    return out


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


# ---------------------------------------------------------------- tables

def _rule(width: int = 78) -> str:
    return "=" * width


def ols_table(fit: OlsFit, precision: int = 6, dependent: str = "", sample: str = "") -> list[str]:
    w = precision + 8
    lines = []
    if dependent:
        lines.append(f"Dependent Variable: {dependent}")
    lines.append("Method: Least Squares")
    if sample:
        lines.append(f"Sample: {sample}")
    lines.append(f"Included observations: {fit.n_obs}")
    lines.append(_rule())
    lines.append(f"{'Variable':<22}{'Coefficient':>{w}}{'Std. Error':>{w}}"
                 f"{'t-Statistic':>{w}}{'Prob.':>{w}}")
    lines.append(_rule())
    for n, b, se, t, p in zip(fit.names, fit.params, fit.bse, fit.tvalues, fit.pvalues):
        lines.append(f"{n:<22}{fmt(b, precision, w)}{fmt(se, precision, w)}"
                     f"{fmt(t, precision, w)}{pfmt(p, w)}")
    lines.append(_rule())
    left = [("R-squared", fit.r_squared), ("Adjusted R-squared", fit.adj_r_squared),
            ("S.E. of regression", fit.se_of_regression),
            ("Sum squared resid", fit.sum_squared_resid), ("Log likelihood", fit.log_likelihood)]
    right = [("Mean dependent var", fit.mean_dependent), ("S.D. dependent var", fit.sd_dependent),
             ("Akaike info criterion", fit.aic), ("Schwarz criterion", fit.sc),
             ("Hannan-Quinn criter.", fit.hq)]
    if fit.f_statistic is not None:
        left += [("F-statistic", fit.f_statistic), ("Prob(F-statistic)", fit.prob_f)]
    right.append(("Durbin-Watson stat", fit.durbin_watson))
    for i in range(max(len(left), len(right))):
        l = f"{left[i][0]:<22}{fmt(left[i][1], precision, w)}" if i < len(left) else " " * (22 + w)
        r = f"    {right[i][0]:<24}{fmt(right[i][1], precision, w)}" if i < len(right) else ""
        lines.append((l + r).rstrip())
    lines.append(_rule())
    return lines


def adf_table(res: AdfResult, precision: int = 6, dates=None) -> list[str]:
    if res.maxlag is None:
        lag_text = f"Lag Length: {res.lag} (Fixed)"
    else:
        lag_text = f"Lag Length: {res.lag} (Automatic - based on SIC, maxlag={res.maxlag})"
    lines = [
        f"Null Hypothesis: {res.tested_label} has a unit root",
        f"Exogenous: {VARIANT_LABELS[res.deterministic]}",
        lag_text,
        _rule(),
        f"{'':<40}{'t-Statistic':>16}{'Prob.*':>10}",
        _rule(),
        f"{'Augmented Dickey-Fuller test statistic':<40}{fmt(res.statistic, precision, 16)}"
        f"{pfmt(res.pvalue, 10)}",
    ]
    for i, (level, cv) in enumerate(res.critical_values.items()):
        head = "Test critical values:" if i == 0 else ""
        lines.append(f"{head:<24}{f'{int(round(level * 100))}% level':<16}{fmt(cv, precision, 16)}")
    lines.append(_rule())
    lines.append("*MacKinnon (1996) one-sided p-values.")
    lines.append("")
    lines.append("Augmented Dickey-Fuller Test Equation")
    dep = f"D({res.tested_label})" if res.diff_order == 0 else f"D({res.name},{res.diff_order + 1})"
    sample = ""
    if dates is not None:
        sample = f"{dates[res.sample[0]].isoformat()} {dates[res.sample[1]].isoformat()}"
    lines += ols_table(res.regression, precision, dep, sample)
    return lines


def var_table(fit: VarFit, precision: int = 6, dates=None) -> list[str]:
    w = precision + 10
    lines = ["Vector Autoregression Estimates"]
    if dates:
        lines.append(f"Sample (adjusted): {dates[0].isoformat()} {dates[-1].isoformat()}")
    lines.append(f"Included observations: {fit.nobs} after adjustments")
    lines.append("Standard errors in ( ) & t-statistics in [ ]")
    lines.append(_rule())
    lines.append(f"{'':<22}" + "".join(f"{n:>{w}}" for n in fit.names))
    lines.append(_rule())
    for i, reg in enumerate(fit.regressor_names):
        lines.append(f"{reg:<22}" + "".join(fmt(eq.params[i], precision, w) for eq in fit.equations))
        lines.append(f"{'':<22}" + "".join(f"({fmt(eq.bse[i], precision)})".rjust(w)
                                              for eq in fit.equations))
        lines.append(f"{'':<22}" + "".join(f"[{fmt(eq.tvalues[i], precision)}]".rjust(w)
                                              for eq in fit.equations))
        lines.append("")
    lines.append(_rule())
    rows = [("R-squared", "r_squared"), ("Adj. R-squared", "adj_r_squared"),
            ("Sum sq. resids", "sum_squared_resid"), ("S.E. equation", "se_of_regression"),
            ("F-statistic", "f_statistic"), ("Log likelihood", "log_likelihood"),
            ("Akaike AIC", "aic"), ("Schwarz SC", "sc"), ("Mean dependent", "mean_dependent"),
            ("S.D. dependent", "sd_dependent")]
    for label, attr in rows:
        lines.append(f"{label:<22}" + "".join(fmt(getattr(eq, attr), precision, w)
                                               for eq in fit.equations))
    lines.append(_rule())
    for label, value in (("Determinant resid covariance (dof adj.)", fit.det_sigma_a),
                         ("Determinant resid covariance", fit.det_sigma_u),
                         ("Log likelihood", fit.log_likelihood),
                         ("Akaike information criterion", fit.aic),
                         ("Schwarz criterion", fit.sc),
                         ("Number of coefficients", fit.n_coefficients)):
        lines.append(f"{label:<44}{fmt(value, precision, 16)}")
    lines.append(_rule())
    return lines


def render_table(report, precision: int = 6) -> str:
    frame = report.frame
    cfg = report.config
    gdates = frame.growth[VARIABLES[0]].dates
    lines = [report.window.title, ""]

    def heading(text: str, section: str):
        note = "" if section in cfg.published else "  [not in published tables]"
        lines.extend(["", f"## {text}{note}", ""])

    if report.adf:
        heading("Unit root tests", "adf")
        for results in report.adf.values():
            for r in results:
                lines.extend(adf_table(r, precision, gdates))
                lines.append("")
    if report.regressions:
        heading("Regressions", "regressions")
        for r in report.regressions:
            sample = f"{r.dates[0].isoformat()} {r.dates[-1].isoformat()}"
            lines.extend(ols_table(r.fit, precision, frame.column_label(r.response), sample))
            lines.append("")
    if report.correlation is not None:
        heading("Correlations", "correlation")
        labels = [frame.column_label(v) for v in VARIABLES]
        w = precision + 10
        lines.append(f"{'':<14}" + "".join(f"{n:>{w}}" for n in labels))
        for n, row in zip(labels, report.correlation):
            lines.append(f"{n:<14}" + "".join(fmt(x, precision, w) for x in row))
    if report.var is not None:
        heading("VAR", "var")
        lines.extend(var_table(report.var, precision, report.var_dates))
    if report.irf:
        heading("Impulse responses (Cholesky, one s.d. shocks)", "irf")
        order = ", ".join(frame.column_label(v) for v in cfg.ordering)
        lines.append(f"Ordering: {order}; return band {cfg.threshold:g} x peak")
        w = precision + 10
        lines.append(f"{'Impulse':<14}{'Response':<14}{'Return horizon':>16}")
        for r in report.irf.values():
            lines.append(f"{r.impulse:<14}{r.response:<14}{fmt(r.return_horizon, 2, 16)}")
    if report.lm_tests:
        heading("VAR residual serial correlation LM tests", "lm_tests")
        w = precision + 8
        for mode, rows in report.lm_tests.items():
            title = ("Null hypothesis: No serial correlation at lag h" if mode == "at-lag-h"
                     else "Null hypothesis: No serial correlation at lags 1 to h")
            lines.append(title)
            lines.append(f"{'Lag':>4}{'LRE* stat':>{w}}{'df':>5}{'Prob.':>9}"
                         f"{'Rao F-stat':>{w}}{'df':>16}{'Prob.':>9}")
            for r in rows:
                df = f"({r.rao_df[0]}, {r.rao_df[1]:.1f})"
                lines.append(f"{r.lag:>4}{fmt(r.lre_stat, precision, w)}{r.df:>5}"
                             f"{pfmt(r.pvalue, 9)}{fmt(r.rao_f, precision, w)}{df:>16}"
                             f"{pfmt(r.rao_pvalue, 9)}")
            lines.append("")
    if report.lag_order:
        heading("VAR lag order selection criteria", "lag_order")
        w = precision + 10
        cols = ("LogL", "LR", "FPE", "AIC", "SC", "HQ")
        lines.append(f"{'Lag':>4}" + "".join(f"{c:>{w}}" for c in cols))
        for r in report.lag_order:
            cells = []
            for key, value in (("", r.loglik), ("lr", r.lr), ("fpe", r.fpe), ("aic", r.aic),
                               ("sc", r.sc), ("hq", r.hq)):
                text = fmt(value, precision)
                if key and r.stars.get(key):
                    text += "*"
                cells.append(text.rjust(w))
            lines.append(f"{r.lag:>4}" + "".join(cells))
        lines.append("* indicates lag order selected by the criterion")
    if report.errors:
        heading("Errors", "errors")
        for e in report.errors:
            lines.append(f"{e['stage']}: {e['error']}: {e['message']}")
    return "\n".join(lines).rstrip() + "\n"


# ---------------------------------------------------------------- CSV

def _csv_text(rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _csv_num(x) -> str:
    x = finite_or_none(x)
    return "" if x is None else repr(x)


def irf_csv(result, horizons_label: str = "horizon") -> str:
    """Horizon/response rows followed by a ``return_horizon`` metadata row."""
    rows = [(horizons_label, "response")]
    rows += [(h, _csv_num(v)) for h, v in enumerate(result.values)]
    rows.append(("return_horizon", _csv_num(result.return_horizon)))
    return _csv_text(rows)


def report_csv(report) -> str:
    """Plot data of one round in long form: panel, series, x, value."""
    rows = [("panel", "series", "x", "value")]
    for r in report.irf.values():
        key = f"{r.impulse}->{r.response}"
        rows += [("irf", key, h, _csv_num(v)) for h, v in enumerate(r.values)]
        rows.append(("irf_return_horizon", key, "", _csv_num(r.return_horizon)))
    for reg in report.regressions:
        key = reg.response
        y = reg.fit.fitted + reg.fit.residuals
        for panel, values in (("actual", y), ("fitted", reg.fit.fitted),
                              ("residual", reg.fit.residuals)):
            rows += [(panel, key, d.isoformat(), _csv_num(v)) for d, v in zip(reg.dates, values)]
    return _csv_text(rows)


def render(report, kind: str, precision: int = 6) -> str:
    if kind == "json":
        return to_json(report_to_dict(report))
    if kind == "csv":
        return report_csv(report)
    if kind == "table":
        return render_table(report, precision)
    raise ValueError(f"unknown format {kind!r}")


def write_atomic(path: str | Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
