"""Augmented Dickey-Fuller test with SIC lag selection and MacKinnon inference.

Test regression, for deterministic variant none / const / trend::

    dy_t = tau * y_{t-1} + sum_{i=1..p} phi_i * dy_{t-i} [+ c] [+ delta * t] + e_t

Critical values come from MacKinnon's finite-sample response surfaces
(2010 update of the single-series coefficients), evaluated at the number of
observations in the test regression.  p-values come from MacKinnon's (1994)
asymptotic normal-polynomial approximation; when a sample size is supplied the
statistic is first shifted by the finite-sample distortion implied by the
critical-value surfaces (see :func:`mackinnon_pvalue`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from econokit.distributions import norm_cdf, norm_ppf
from econokit.errors import (ConfigError, DegenerateInputError, DomainError,
                             InsufficientDataError)
from econokit.linreg import OlsFit, fit_ols

LEVELS = (0.01, 0.05, 0.10)
VARIANTS = ("none", "const", "trend")

_ALIASES = {
    "none": "none", "n": "none", "nc": "none",
    "const": "const", "constant": "const", "c": "const",
    "trend": "trend", "ct": "trend", "constant+trend": "trend", "const+trend": "trend",
}

VARIANT_LABELS = {
    "none": "None",
    "const": "Constant",
    "trend": "Constant, Linear Trend",
}

# Response-surface coefficients (beta_inf, beta_1, beta_2, beta_3) for the
# 1%, 5% and 10% quantiles of the tau statistic with one integrated series.
_CV_SURFACE = {
    "none": (
        (-2.56574, -2.2358, -3.627, 0.0),
        (-1.94100, -0.2686, -3.365, 31.223),
        (-1.61682, 0.2656, -2.714, 25.364),
    ),
    "const": (
        (-3.43035, -6.5393, -16.786, -79.433),
        (-2.86154, -2.8903, -4.234, -40.040),
        (-2.56677, -1.5384, -2.809, 0.0),
    ),
    "trend": (
        (-3.95877, -9.0531, -28.428, -134.155),
        (-3.41049, -4.3904, -9.036, -45.374),
        (-3.12705, -2.5856, -3.925, -22.380),
    ),
}

# Asymptotic p-value polynomials: p = Phi(poly(tau)).  "small" applies for
# tau <= tau_star, "large" above it; outside [tau_min, tau_max] the p-value
# is 0 or 1.
_P_TAU_STAR = {"none": -1.04, "const": -1.61, "trend": -2.89}
_P_TAU_MIN = {"none": -19.04, "const": -18.83, "trend": -16.18}
_P_TAU_MAX = {"none": math.inf, "const": 2.74, "trend": 0.7}
_P_SMALL = {
    "none": (0.6344, 1.2378, 3.2496e-2),
    "const": (2.1659, 1.4412, 3.8269e-2),
    "trend": (3.2512, 1.6047, 4.9588e-2),
}
_P_LARGE = {
    "none": (0.4797, 9.3557e-1, -0.6999e-1, 3.3066e-2),
    "const": (1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2),
    "trend": (2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2),
}

P_CLAMP = 1e-6


def canonical_variant(variant: str) -> str:
    try:
        return _ALIASES[str(variant).strip().lower()]
    except KeyError:
        raise ConfigError(
            f"unsupported deterministic variant {variant!r}; use none, const or trend") from None


def _level_index(level: float) -> int:
    for i, lv in enumerate(LEVELS):
        if abs(level - lv) < 1e-12:
            return i
    raise DomainError(f"critical values are tabulated at 1%, 5% and 10% only (got {level})")


def mackinnon_critical(variant: str, level: float, n: int | None) -> float:
    """Finite-sample critical value; ``n=None`` gives the asymptotic value."""
    v = canonical_variant(variant)
    b = _CV_SURFACE[v][_level_index(level)]
    if n is None:
        return b[0]
    if n < 10:
        raise DomainError("the critical-value surface is not usable below 10 observations")
    inv = 1.0 / n
    return b[0] + b[1] * inv + b[2] * inv ** 2 + b[3] * inv ** 3


def critical_values(variant: str, n: int | None) -> dict[float, float]:
    return {lv: mackinnon_critical(variant, lv, n) for lv in LEVELS}


def _asymptotic_p(stat: float, v: str) -> float:
    if stat > _P_TAU_MAX[v]:
        return 1.0
    if stat < _P_TAU_MIN[v]:
        return 0.0
    coef = _P_SMALL[v] if stat <= _P_TAU_STAR[v] else _P_LARGE[v]
    x = sum(c * stat ** i for i, c in enumerate(coef))
    return norm_cdf(x)


def _finite_sample_shift(v: str, n: int):
    """Shift q_n(p) - q_inf(p) as a function of z = Phi^{-1}(p).

    Linear in z through the three tabulated levels, extended linearly into
    the left tail and held flat above the 10% point.
    """
    z = [norm_ppf(lv) for lv in LEVELS]
    d = [mackinnon_critical(v, lv, n) - mackinnon_critical(v, lv, None) for lv in LEVELS]

    def shift(zz: float) -> float:
        if zz >= z[2]:
            return d[2]
        if zz >= z[1]:
            w = (zz - z[1]) / (z[2] - z[1])
            return d[1] + w * (d[2] - d[1])
        w = (zz - z[0]) / (z[1] - z[0])
        return d[0] + w * (d[1] - d[0])

    return shift


def mackinnon_pvalue(statistic: float, variant: str, nobs: int | None = None) -> float:
    """One-sided (left-tail) p-value of an ADF tau statistic.

    With ``nobs=None`` this is the asymptotic MacKinnon approximation.  With a
    sample size, the statistic is mapped onto the asymptotic scale by solving
    ``s + shift(Phi^{-1}(P(s))) = statistic`` so that the statistic sitting at
    a tabulated finite-sample critical value gets (almost exactly) that level.
    The result is clamped to [1e-6, 1 - 1e-6].
    """
    if not math.isfinite(statistic):
        raise DomainError("ADF statistic must be finite")
    v = canonical_variant(variant)
    if nobs is None:
        p = _asymptotic_p(statistic, v)
    else:
        shift = _finite_sample_shift(v, nobs)

        def g(s: float) -> float:
            p_s = min(max(_asymptotic_p(s, v), P_CLAMP), 1.0 - P_CLAMP)
            return s + shift(norm_ppf(p_s)) - statistic

        lo, hi = statistic - 5.0, statistic + 5.0
        while g(lo) > 0:
            lo -= 5.0
        while g(hi) < 0:
            hi += 5.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if g(mid) < 0:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-12:
                break
        p = _asymptotic_p(0.5 * (lo + hi), v)
    return min(max(p, P_CLAMP), 1.0 - P_CLAMP)


def auto_maxlag(n_effective: int) -> int:
    """Default maximum augmentation lag for a series with ``n_effective`` differences."""
    if n_effective < 4:
        raise InsufficientDataError("automatic lag length needs at least 4 observations")
    return int(math.floor(min(n_effective / 3.0, 12.0) * (n_effective / 100.0) ** 0.25))


@dataclass(frozen=True)
class AdfSpec:
    """ADF settings.  ``lag=None`` selects the lag by SIC up to ``maxlag``
    (``maxlag=None`` applies :func:`auto_maxlag`)."""

    deterministic: str = "const"
    lag: int | None = None
    maxlag: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "deterministic", canonical_variant(self.deterministic))
        if self.lag is not None and self.lag < 0:
            raise ConfigError("ADF lag must be >= 0")
        if self.maxlag is not None and self.maxlag < 0:
            raise ConfigError("ADF maxlag must be >= 0")

    @property
    def automatic(self) -> bool:
        return self.lag is None


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    pvalue: float
    critical_values: Mapping[float, float]
    lag: int
    maxlag: int | None
    nobs: int
    deterministic: str
    diff_order: int
    name: str
    regression: OlsFit = field(repr=False)
    sample: tuple[int, int] = (0, 0)

    def rejects(self, level: float = 0.05) -> bool:
        return self.statistic < self.critical_values[LEVELS[_level_index(level)]]

    @property
    def tested_label(self) -> str:
        return f"D({self.name})" if self.diff_order else self.name


def _lag_label(label: str, lag: int, diff: int) -> str:
    # EViews style: X(-1), D(X(-1)), D(X(-1),2)
    if diff == 0:
        return f"{label}(-{lag})"
    if diff == 1:
        return f"D({label}(-{lag}))"
    return f"D({label}(-{lag}),{diff})"


def _design(y: np.ndarray, p: int, first_t: int, variant: str, label: str, diff: int = 0):
    dy = np.diff(y)
    t = np.arange(first_t, y.size)
    dep = dy[t - 1]
    cols = [y[t - 1]]
    names = [_lag_label(label, 1, diff)]
    for i in range(1, p + 1):
        cols.append(dy[t - i - 1])
        names.append(_lag_label(label, i, diff + 1))
    if variant == "trend":
        cols.append(t.astype(float))
        names.append("@TREND")
    return dep, np.column_stack(cols), names


def _params_for(p: int, variant: str) -> int:
    return 1 + p + {"none": 0, "const": 1, "trend": 2}[variant]


def adf_test(series, spec: AdfSpec | None = None, diff: int = 0,
             name: str | None = None) -> AdfResult:
    """Run the ADF test on ``series`` (or on its ``diff``-th difference).

    The automatic lag range is always derived from the undifferenced input:
    ``auto_maxlag(len(series) - 1)`` also when testing a difference.
    """
    spec = spec or AdfSpec()
    values = getattr(series, "values", series)
    x = np.asarray(values, dtype=float).ravel()
    name = name or getattr(series, "name", None) or "Y"
    label = name.upper()
    if not np.all(np.isfinite(x)):
        raise DomainError("ADF input contains non-finite values")
    if diff < 0:
        raise DomainError("difference order must be >= 0")
    y = np.diff(x, n=diff) if diff else x
    if y.size < 3:
        raise InsufficientDataError("ADF test needs at least 3 observations")
    if np.ptp(y) == 0.0:
        raise DegenerateInputError(f"{name}: constant series has no ADF statistic")
    v = spec.deterministic
    n_dy = y.size - 1

    if spec.automatic:
        maxlag = spec.maxlag if spec.maxlag is not None else auto_maxlag(x.size - 1)
        maxlag = min(maxlag, max(n_dy - 1, 0))
        while maxlag > 0 and n_dy - maxlag <= _params_for(maxlag, v):
            maxlag -= 1
        if n_dy - maxlag <= _params_for(maxlag, v):
            raise InsufficientDataError(f"{name}: too few observations for the ADF regression")
        candidates = _sic_candidates(y, maxlag, v, label)
        lag = min(candidates, key=lambda c: (c[1], c[0]))[0]
    else:
        maxlag = spec.maxlag
        lag = spec.lag
        if n_dy - lag <= _params_for(lag, v):
            raise InsufficientDataError(f"{name}: too few observations for ADF lag {lag}")

    dep, X, names = _design(y, lag, lag + 1, v, label, diff)
    fit = fit_ols(dep, X, intercept=v != "none", names=names)
    stat = float(fit.tvalues[0])
    nobs = fit.n_obs
    cvs = critical_values(v, nobs)
    return AdfResult(
        statistic=stat,
        pvalue=mackinnon_pvalue(stat, v, nobs),
        critical_values=cvs,
        lag=lag,
        maxlag=maxlag if spec.automatic else spec.maxlag,
        nobs=nobs,
        deterministic=v,
        diff_order=diff,
        name=label,
        regression=fit,
        sample=(lag + 1 + diff, x.size - 1),
    )


def _sic_candidates(y: np.ndarray, maxlag: int, v: str, label: str) -> list[tuple[int, float]]:
    # every candidate lag is scored on the common sample that maxlag leaves
    out = []
    for p in range(maxlag + 1):
        dep, X, names = _design(y, p, maxlag + 1, v, label)
        out.append((p, fit_ols(dep, X, intercept=v != "none", names=names).sc))
    return out


def sic_by_lag(series, maxlag: int, deterministic: str, diff: int = 0) -> list[tuple[int, float]]:
    """(lag, SIC) of every candidate regression, for audits of the automatic choice."""
    x = np.asarray(getattr(series, "values", series), dtype=float).ravel()
    y = np.diff(x, n=diff) if diff else x
    return _sic_candidates(y, maxlag, canonical_variant(deterministic), "Y")


DEFAULT_SPECS: Mapping[str, AdfSpec] = {
    "growthc": AdfSpec("const"),
    "gsensex": AdfSpec("none"),
    "gex": AdfSpec("none"),
}


class AdfPolicy:
    """Stationarity rule: stationary when the ADF test rejects at ``level``."""

    def __init__(self, specs: Mapping[str, AdfSpec] | None = None, level: float = 0.05):
        self.specs = dict(DEFAULT_SPECS)
        if specs:
            self.specs.update(specs)
        self.level = level

    def test(self, name: str, series) -> AdfResult:
        return adf_test(series, self.specs.get(name, AdfSpec()), name=name)

    def __call__(self, name: str, series) -> bool:
        return self.test(name, series).rejects(self.level)
