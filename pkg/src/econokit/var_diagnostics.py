"""Impulse responses, residual serial-correlation LM tests and lag-order selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from econokit.distributions import chi2_ppf, chi2_sf, f_sf
from econokit.errors import DomainError, InsufficientDataError, SingularityError
from econokit.linreg import lstsq_qr
from econokit.var import fit_var, system_hq, system_loglik

AT_LAG = "at-lag-h"
CUMULATIVE = "lags-1-to-h"


@dataclass(frozen=True, eq=False)
class IrfResult:
    impulse: str
    response: str
    values: np.ndarray
    return_horizon: float | None = None

    @property
    def horizons(self) -> np.ndarray:
        return np.arange(self.values.size)


def ma_matrices(coefs: np.ndarray, horizons: int) -> np.ndarray:
    """Reduced-form moving-average matrices Phi_0 = I, Phi_h = sum_i A_i Phi_{h-i}."""
    p, K, _ = coefs.shape
    phi = np.zeros((horizons + 1, K, K))
    phi[0] = np.eye(K)
    for h in range(1, horizons + 1):
        for i in range(1, min(h, p) + 1):
            phi[h] += coefs[i - 1] @ phi[h - i]
    return phi


def impact_matrix(sigma: np.ndarray, ordering: Sequence[int]) -> np.ndarray:
    """Lower Cholesky factor of ``sigma`` under ``ordering``, mapped back to the
    original variable order (column j = shock to variable j)."""
    idx = list(ordering)
    try:
        chol = np.linalg.cholesky(sigma[np.ix_(idx, idx)])
    except np.linalg.LinAlgError:
        raise SingularityError("residual covariance is not positive definite") from None
    B = np.zeros_like(sigma)
    B[np.ix_(idx, idx)] = chol
    return B


def orthogonal_irf(fit, horizons: int = 10, ordering: Sequence[str] | None = None) -> np.ndarray:
    """(H+1, K, K) array; ``[h, j, i]`` is the response of variable j to a one-s.d.
    orthogonalized shock in variable i."""
    if horizons < 0:
        raise DomainError("horizons must be >= 0")
    names = list(fit.names)
    ordering = list(ordering) if ordering is not None else names
    if sorted(ordering) != sorted(names):
        raise DomainError(f"ordering {ordering} is not a permutation of {names}")
    B = impact_matrix(fit.sigma_a, [names.index(v) for v in ordering])
    return ma_matrices(fit.coefs, horizons) @ B


def cholesky_irf(fit, horizons: int = 10, ordering: Sequence[str] | None = None,
                 threshold: float = 0.05) -> dict[tuple[str, str], IrfResult]:
    """Orthogonalized responses for every (impulse, response) pair."""
    psi = orthogonal_irf(fit, horizons, ordering)
    out = {}
    for i, imp in enumerate(fit.names):
        for j, resp in enumerate(fit.names):
            values = psi[:, j, i].copy()
            out[(imp, resp)] = IrfResult(imp, resp, values, return_horizon(values, threshold))
    return out


def return_horizon(irf, threshold_fraction: float = 0.05) -> float | None:
    """Horizon after the peak at which |response| drops below the band
    ``threshold_fraction * max|response|`` and stays there through the last
    horizon.  Linear interpolation between the last horizon above the band and
    the first one inside it.  ``None`` for an all-zero response or one that is
    still outside the band at the final horizon.
    """
    if not 0.0 < threshold_fraction < 1.0:
        raise DomainError("threshold fraction must lie in (0, 1)")
    values = irf.values if isinstance(irf, IrfResult) else irf
    r = np.abs(np.asarray(values, dtype=float))
    peak = float(r.max()) if r.size else 0.0
    if peak == 0.0:
        return None
    band = threshold_fraction * peak
    above = np.nonzero(r >= band)[0]
    last = int(above[-1])
    if last == r.size - 1:
        return None
    a, b = r[last], r[last + 1]
    return last + (a - band) / (a - b)


@dataclass(frozen=True)
class LmTestRow:
    lag: int
    mode: str
    lre_stat: float
    df: int
    pvalue: float
    rao_f: float
    rao_df: tuple[int, float]
    rao_pvalue: float


def rao_degrees(T: int, K: int, m: int, h: int) -> tuple[int, float, float, float]:
    """(q, df2, s, N) of the Rao F approximation with ``h`` lagged residual blocks."""
    q = K * K * h
    num = K ** 4 * h * h - 4.0
    den = K * K + K * K * h * h - 5.0
    s = math.sqrt(num / den) if num > 0 and den > 0 else 1.0
    N = T - m - K * h - (K - K * h + 1) / 2.0
    df2 = N * s - q / 2.0 + 1.0
    return q, df2, s, N


def lm_serial_test(fit, h: int, mode: str = AT_LAG) -> LmTestRow:
    """Test for residual autocorrelation at lag h (or lags 1..h).

    The residuals are regressed on the VAR regressors plus lagged residual
    blocks (pre-sample lags set to zero).  With lambda the ratio of the
    residual covariance determinants (auxiliary over original), the
    small-sample corrected LR statistic is -N ln(lambda) against chi2(q) and
    the Rao statistic is (lambda^{-1/s} - 1) (N s - q/2 + 1) / q.
    """
    if h < 1:
        raise DomainError("LM test lag must be >= 1")
    if mode not in (AT_LAG, CUMULATIVE):
        raise DomainError(f"mode must be {AT_LAG!r} or {CUMULATIVE!r}")
    E = fit.residuals
    X = fit.regressors
    T, K = E.shape
    m = X.shape[1]
    lags = range(1, h + 1) if mode == CUMULATIVE else (h,)
    blocks = len(lags)
    if T - m - K * blocks <= 0 or h >= T:
        raise InsufficientDataError(f"residual sample of {T} is too short for lag {h}")
    Z = [X]
    for lag in lags:
        shifted = np.zeros_like(E)
        shifted[lag:] = E[:-lag]
        Z.append(shifted)
    Z = np.column_stack(Z)
    beta, _ = lstsq_qr(E, Z)
    U = E - Z @ beta
    lam = np.linalg.det(U.T @ U / T) / np.linalg.det(E.T @ E / T)
    if not 0.0 < lam:
        raise SingularityError("auxiliary residual covariance is singular")
    lam = min(lam, 1.0)
    q, df2, s, N = rao_degrees(T, K, m, blocks)
    lre = -N * math.log(lam)
    rao = (lam ** (-1.0 / s) - 1.0) * df2 / q
    return LmTestRow(
        lag=h,
        mode=mode,
        lre_stat=lre,
        df=q,
        pvalue=chi2_sf(lre, q),
        rao_f=rao,
        rao_df=(q, df2),
        rao_pvalue=f_sf(rao, q, df2) if df2 > 0 else math.nan,
    )


@dataclass(frozen=True)
class LagOrderRow:
    lag: int
    loglik: float
    lr: float | None
    fpe: float
    aic: float
    sc: float
    hq: float
    stars: dict


CRITERIA = ("lr", "fpe", "aic", "sc", "hq")


def lag_order_table(columns, max_lag: int, names: Sequence[str] | None = None,
                    lr_level: float = 0.05) -> list[LagOrderRow]:
    """Fit VAR(0..max_lag) on the common sample of T - max_lag observations."""
    data = np.asarray(columns, dtype=float)
    if data.ndim != 2:
        raise DomainError("lag-order data must be 2-d (observations x variables)")
    T_raw, K = data.shape
    if max_lag < 1:
        raise DomainError("max_lag must be >= 1")
    T = T_raw - max_lag
    if T <= K * max_lag + 1:
        raise InsufficientDataError(
            f"{T_raw} observations cannot support lag-order selection up to {max_lag}")

    dets = []
    for p in range(max_lag + 1):
        if p == 0:
            E = data[max_lag:] - data[max_lag:].mean(axis=0)
            det = float(np.linalg.det(E.T @ E / T))
        else:
            det = fit_var(data[max_lag - p:], p, names).det_sigma_u
        if det <= 0:
            raise SingularityError(f"residual covariance of VAR({p}) is singular")
        dets.append(det)

    crit_lr = chi2_ppf(1.0 - lr_level, K * K)
    rows = []
    for p, det in enumerate(dets):
        m = K * p + 1
        ll = system_loglik(det, T, K)
        lr = None if p == 0 else (T - m) * (math.log(dets[p - 1]) - math.log(det))
        fpe = det * ((T + m) / (T - m)) ** K
        n_coef = K * m
        rows.append(dict(
            lag=p, loglik=ll, lr=lr, fpe=fpe,
            aic=(-2.0 * ll + 2.0 * n_coef) / T,
            sc=(-2.0 * ll + n_coef * math.log(T)) / T,
            hq=system_hq(ll, T, n_coef),
        ))

    chosen = {}
    chosen["lr"] = 0
    for p in range(max_lag, 0, -1):
        if rows[p]["lr"] > crit_lr:
            chosen["lr"] = p
            break
    for c in ("fpe", "aic", "sc", "hq"):
        chosen[c] = min(range(len(rows)), key=lambda i: (rows[i][c], i))
    return [
        LagOrderRow(stars={c: chosen[c] == r["lag"] for c in CRITERIA}, **r)
        for r in rows
    ]
