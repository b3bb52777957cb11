"""Ordinary least squares with the full regression diagnostic block.

Information criteria use the per-observation convention::

    aic = (-2 LL + 2 k) / n
    sc  = (-2 LL + k ln n) / n
    hq  = (-2 LL + 2 k ln ln n) / n

R-squared is always the centered version, also for regressions without an
intercept (the adjusted value then follows the same formula).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from econokit.distributions import f_sf, t_two_sided
from econokit.errors import DomainError, InsufficientDataError, SingularityError

RANK_TOL = 1e-10

_LN_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class OlsFit:
    """Result of :func:`fit_ols`.

    Coefficient-level arrays are ordered like ``names``.  Statistics that are
    undefined for a given model (F for a regression without intercept, any
    likelihood-based quantity for an exact fit) are ``None`` or infinite.
    """

    names: tuple[str, ...]
    params: np.ndarray
    bse: np.ndarray
    tvalues: np.ndarray
    pvalues: np.ndarray
    r_squared: float
    adj_r_squared: float
    se_of_regression: float
    sum_squared_resid: float
    log_likelihood: float
    aic: float
    sc: float
    hq: float
    f_statistic: float | None
    prob_f: float | None
    durbin_watson: float | None
    mean_dependent: float
    sd_dependent: float
    n_obs: int
    k_params: int
    has_constant: bool
    residuals: np.ndarray = field(repr=False)
    fitted: np.ndarray = field(repr=False)
    cov_params: np.ndarray = field(repr=False)

    @property
    def df_resid(self) -> int:
        return self.n_obs - self.k_params

    def coef(self, name: str) -> float:
        return float(self.params[self.names.index(name)])

    def row(self, name: str) -> tuple[float, float, float, float]:
        """(coefficient, standard error, t-statistic, p-value) for one regressor."""
        i = self.names.index(name)
        return (float(self.params[i]), float(self.bse[i]),
                float(self.tvalues[i]), float(self.pvalues[i]))


def log_likelihood_gaussian(ssr: float, n: int) -> float:
    """Concentrated Gaussian log-likelihood of a regression with ``n`` residuals."""
    if ssr <= 0:
        raise DomainError("log-likelihood needs a positive sum of squared residuals")
    if n <= 0:
        raise DomainError("log-likelihood needs n > 0")
    return -0.5 * n * (1.0 + _LN_2PI + math.log(ssr / n))


def info_criteria(log_likelihood: float, n: int, k: int) -> tuple[float, float, float]:
    """Per-observation (aic, sc, hq)."""
    if n < 2:
        raise DomainError("information criteria need n >= 2")
    if k < 1:
        raise DomainError("information criteria need k >= 1")
    base = -2.0 * log_likelihood
    aic = (base + 2.0 * k) / n
    sc = (base + k * math.log(n)) / n
    hq = (base + 2.0 * k * math.log(math.log(n))) / n
    return aic, sc, hq


def f_test(r_squared: float, n: int, k: int) -> tuple[float, float]:
    """Overall-significance F statistic of an intercept model and its p-value.

    ``k`` counts the intercept.  A perfect fit returns ``(inf, 0.0)``.
    """
    if k < 2:
        raise DomainError("the regression F test needs an intercept plus at least one regressor")
    if n <= k:
        raise InsufficientDataError("F test needs n > k")
    if not 0.0 <= r_squared <= 1.0:
        raise DomainError("R-squared must lie in [0, 1] for the F test")
    if r_squared >= 1.0:
        return math.inf, 0.0
    f = (r_squared / (k - 1)) / ((1.0 - r_squared) / (n - k))
    return f, f_sf(f, k - 1, n - k)


def durbin_watson(residuals: Sequence[float]) -> float:
    e = np.asarray(residuals, dtype=float)
    if e.size < 2:
        raise DomainError("Durbin-Watson needs at least two residuals")
    denom = float(e @ e)
    if denom == 0.0:
        raise DomainError("Durbin-Watson is undefined for all-zero residuals")
    d = np.diff(e)
    return float(d @ d) / denom


def _as_design(X, n: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise DomainError("regressors must be a 1-d or 2-d array")
    if X.shape[0] != n and X.shape[1] == n:
        # a list of columns
        X = X.T
    if X.shape[0] != n:
        raise DomainError(f"regressor rows ({X.shape[0]}) do not match y ({n})")
    return X


def lstsq_qr(y: np.ndarray, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares coefficients and (X'X)^{-1} through a Householder QR.

    Columns are equilibrated to unit norm first so the rank test is scale free.
    Raises :class:`SingularityError` when a pivot of R falls below
    ``RANK_TOL`` times the largest pivot.
    """
    norms = np.sqrt((X * X).sum(axis=0))
    if np.any(norms == 0.0):
        raise SingularityError("design matrix has an all-zero column")
    Xs = X / norms
    q, r = np.linalg.qr(Xs, mode="reduced")
    diag = np.abs(np.diag(r))
    if diag.min() <= RANK_TOL * diag.max():
        raise SingularityError("design matrix is rank deficient")
    rinv = np.linalg.solve(r, np.eye(r.shape[0]))
    qty = q.T @ y
    beta = (rinv @ qty) / (norms if qty.ndim == 1 else norms[:, None])
    xtx_inv = (rinv @ rinv.T) / np.outer(norms, norms)
    return beta, xtx_inv


def fit_ols(y, X=None, intercept: bool = True, names: Sequence[str] | None = None) -> OlsFit:
    """Fit ``y`` on the columns of ``X`` by least squares.

    Parameters
    ----------
    y : array_like, shape (n,)
    X : array_like, shape (n, k0) or None
        Regressors without the constant.  ``None`` means an intercept-only model.
    intercept : bool
        Append a constant column named ``"C"`` after the regressors.
    names : sequence of str, optional
        Names for the columns of ``X``; defaults to ``x1, x2, ...``.
    """
    y = np.asarray(y, dtype=float).ravel()
    n = y.size
    if X is None:
        X = np.empty((n, 0))
    X = _as_design(X, n)
    if names is None:
        names = [f"x{i + 1}" for i in range(X.shape[1])]
    names = list(names)
    if len(names) != X.shape[1]:
        raise DomainError("names must match the number of regressor columns")
    if intercept:
        X = np.column_stack([X, np.ones(n)])
        names.append("C")
    k = X.shape[1]
    if k == 0:
        raise DomainError("no regressors")
    if n <= k:
        raise InsufficientDataError(f"need more observations ({n}) than parameters ({k})")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(X))):
        raise DomainError("non-finite values in regression data")

    has_constant = bool(intercept) or any(
        np.ptp(X[:, j]) == 0.0 and X[0, j] != 0.0 for j in range(k)
    )
    beta, xtx_inv = lstsq_qr(y, X)
    fitted = X @ beta
    resid = y - fitted
    ssr = float(resid @ resid)
    ybar = float(y.mean())
    tss = float(((y - ybar) ** 2).sum())
    df = n - k
    s2 = ssr / df
    cov = s2 * xtx_inv
    bse = np.sqrt(np.diag(cov))

    exact = ssr <= 1e-30 * max(1.0, float(y @ y))
    if exact:
        resid = np.zeros_like(resid)
        fitted = y.copy()
        ssr = 0.0
        cov = np.zeros_like(cov)
        bse = np.zeros(k)
        tvalues = np.full(k, np.nan)
        pvalues = np.full(k, np.nan)
    else:
        tvalues = beta / bse
        pvalues = np.array([t_two_sided(float(t), df) for t in tvalues])

    r2 = 1.0 - ssr / tss if tss > 0 else (1.0 if exact else 0.0)
    adj = 1.0 - (1.0 - r2) * (n - 1) / df
    if exact:
        ll, aic, sc, hq = math.inf, -math.inf, -math.inf, -math.inf
        dw = None
    else:
        ll = log_likelihood_gaussian(ssr, n)
        aic, sc, hq = info_criteria(ll, n, k) if n >= 2 else (math.nan,) * 3
        dw = durbin_watson(resid)
    if has_constant and k >= 2:
        f, pf = f_test(min(max(r2, 0.0), 1.0), n, k)
    else:
        f, pf = None, None

    return OlsFit(
        names=tuple(names),
        params=beta,
        bse=bse,
        tvalues=tvalues,
        pvalues=pvalues,
        r_squared=r2,
        adj_r_squared=adj,
        se_of_regression=math.sqrt(s2) if not exact else 0.0,
        sum_squared_resid=ssr,
        log_likelihood=ll,
        aic=aic,
        sc=sc,
        hq=hq,
        f_statistic=f,
        prob_f=pf,
        durbin_watson=dw,
        mean_dependent=ybar,
        sd_dependent=math.sqrt(tss / (n - 1)) if n > 1 else 0.0,
        n_obs=n,
        k_params=k,
        has_constant=has_constant,
        residuals=resid,
        fitted=fitted,
        cov_params=cov,
    )
