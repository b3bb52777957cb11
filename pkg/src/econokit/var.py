"""VAR(p) estimation by equation-wise OLS, system statistics, companion form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from econokit.errors import DomainError, InsufficientDataError, SingularityError
from econokit.linreg import OlsFit, fit_ols

_LN_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class VarFit:
    """Estimated VAR(p).

    ``coefs[i]`` is the (K x K) lag-(i+1) matrix A_{i+1}; row j holds the
    coefficients of equation j.  ``sigma_u`` divides the residual cross
    products by T, ``sigma_a`` by T - m with m = K p + 1 regressors per equation.
    """

    names: tuple[str, ...]
    lags: int
    equations: tuple[OlsFit, ...]
    coefs: np.ndarray = field(repr=False)
    intercept: np.ndarray = field(repr=False)
    sigma_u: np.ndarray = field(repr=False)
    sigma_a: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    regressors: np.ndarray = field(repr=False)
    endog: np.ndarray = field(repr=False)
    regressor_names: tuple[str, ...]
    log_likelihood: float
    aic: float
    sc: float
    hq: float
    nobs: int

    @property
    def k_vars(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return self.k_vars * self.lags + 1

    @property
    def n_coefficients(self) -> int:
        return self.k_vars * self.m

    @property
    def det_sigma_u(self) -> float:
        return float(np.linalg.det(self.sigma_u))

    @property
    def det_sigma_a(self) -> float:
        return float(np.linalg.det(self.sigma_a))


def lag_matrix(data: np.ndarray, p: int, names: Sequence[str]) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Dependent block Y_t and regressors [y_{t-1}..y_{t-p}] for t = p..T-1.

    Regressors are ordered variable-major (all lags of variable 1 first), the
    layout of the printed estimate tables.
    """
    T, K = data.shape
    cols, labels = [], []
    for j, nm in enumerate(names):
        for i in range(1, p + 1):
            cols.append(data[p - i:T - i, j])
            labels.append(f"{nm}(-{i})")
    X = np.column_stack(cols) if cols else np.empty((T - p, 0))
    return data[p:], X, labels


def _regressor_index(K: int, p: int, var: int, lag: int) -> int:
    return var * p + (lag - 1)


def system_loglik(det_sigma_u: float, T: int, K: int) -> float:
    if det_sigma_u <= 0:
        raise DomainError("residual covariance determinant must be positive")
    return -0.5 * T * K * (1.0 + _LN_2PI) - 0.5 * T * math.log(det_sigma_u)


def system_criteria(loglik: float, T: int, n_coefficients: int) -> tuple[float, float]:
    """Per-observation system (aic, sc)."""
    if T < 2:
        raise DomainError("system criteria need T >= 2")
    aic = (-2.0 * loglik + 2.0 * n_coefficients) / T
    sc = (-2.0 * loglik + n_coefficients * math.log(T)) / T
    return aic, sc


def system_hq(loglik: float, T: int, n_coefficients: int) -> float:
    if T < 3:
        raise DomainError("Hannan-Quinn needs T >= 3")
    return (-2.0 * loglik + 2.0 * n_coefficients * math.log(math.log(T))) / T


def fit_var(data, p: int, names: Sequence[str] | None = None) -> VarFit:
    """Fit a VAR(p) with intercept to the columns of ``data`` (T_raw x K)."""
    data = np.asarray(data, dtype=float)
    if data.ndim != 2:
        raise DomainError("VAR data must be a 2-d array (observations x variables)")
    T_raw, K = data.shape
    if names is None:
        names = [f"y{j + 1}" for j in range(K)]
    names = tuple(names)
    if len(names) != K:
        raise DomainError("names must match the number of columns")
    if p < 1:
        raise DomainError("VAR lag order must be >= 1")
    if not np.all(np.isfinite(data)):
        raise DomainError("VAR data contain non-finite values")
    m = K * p + 1
    if T_raw <= m + p:
        raise InsufficientDataError(
            f"VAR({p}) with {K} variables needs more than {m + p} observations, got {T_raw}")

    Y, X, labels = lag_matrix(data, p, names)
    T = Y.shape[0]
    equations = []
    try:
        for j in range(K):
            equations.append(fit_ols(Y[:, j], X, intercept=True, names=labels))
    except SingularityError as exc:
        raise SingularityError(f"collinear lagged regressors: {exc}") from None

    B = np.column_stack([eq.params for eq in equations])  # (m x K)
    coefs = np.empty((p, K, K))
    for i in range(1, p + 1):
        for v in range(K):
            coefs[i - 1, :, v] = B[_regressor_index(K, p, v, i), :]
    intercept = B[-1, :].copy()
    E = np.column_stack([eq.residuals for eq in equations])
    sigma_u = E.T @ E / T
    sigma_a = E.T @ E / (T - m)
    det_u = float(np.linalg.det(sigma_u))
    if det_u <= 0:
        raise SingularityError("residual covariance is not positive definite")
    ll = system_loglik(det_u, T, K)
    aic, sc = system_criteria(ll, T, K * m)
    hq = system_hq(ll, T, K * m) if T >= 3 else math.nan
    return VarFit(
        names=names,
        lags=p,
        equations=tuple(equations),
        coefs=coefs,
        intercept=intercept,
        sigma_u=sigma_u,
        sigma_a=sigma_a,
        residuals=E,
        regressors=np.column_stack([X, np.ones(T)]),
        endog=data,
        regressor_names=tuple(labels) + ("C",),
        log_likelihood=ll,
        aic=aic,
        sc=sc,
        hq=hq,
        nobs=T,
    )


def companion_matrix(coefs: np.ndarray) -> np.ndarray:
    p, K, _ = coefs.shape
    C = np.zeros((K * p, K * p))
    C[:K, :] = np.concatenate(list(coefs), axis=1)
    if p > 1:
        C[K:, :-K] = np.eye(K * (p - 1))
    return C


def companion_eigenvalues(fit: VarFit | np.ndarray) -> np.ndarray:
    """Moduli of the companion-matrix eigenvalues, largest first."""
    coefs = fit.coefs if isinstance(fit, VarFit) else np.asarray(fit, dtype=float)
    if coefs.ndim == 2:
        coefs = coefs[None]
    moduli = np.abs(np.linalg.eigvals(companion_matrix(coefs)))
    return np.sort(moduli)[::-1]


def is_stable(fit: VarFit, tol: float = 1e-9) -> bool:
    return bool(companion_eigenvalues(fit)[0] < 1.0 - tol)
