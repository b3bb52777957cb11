"""Acceptance criteria 1-10.

Each test prints one ``CRITERION n: PASS|FAIL|SKIP`` line; the lines are also
collected and repeated in the pytest terminal summary.  Run the file directly
(``python3 tests/test_acceptance.py``) for the lines alone.
"""

import itertools
import math
import os
import time
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from econokit.linreg import fit_ols
from econokit.unitroot import AdfSpec, adf_test, auto_maxlag, critical_values
from econokit.var import fit_var, system_loglik
from econokit.var_diagnostics import AT_LAG, lm_serial_test, orthogonal_irf, rao_degrees

RESULTS: list[str] = []


def record(n: int, ok: bool | None, detail: str) -> None:
    status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
    line = f"CRITERION {n}: {status} - {detail}"
    RESULTS.append(line)
    print(line)


# ---------------------------------------------------------------- criterion 1

def half_unit(x: float) -> float:
    """Half a unit in the last printed decimal of ``x``."""
    return 0.5 * 10.0 ** Decimal(repr(float(x))).as_tuple().exponent


class Consistency:
    """Recompute a statistic from printed inputs and compare with the printed value.

    A check is skipped (and counted) when rounding of the printed inputs and
    output alone can move the result by more than the tolerance.  Skipped
    checks must still agree within that rounding bound.
    """

    def __init__(self):
        self.checked = self.skipped = 0
        self.failures: list[str] = []

    def check(self, label, f, inputs, printed, atol=None, rtol=None, exact=()):
        names = list(inputs)
        base = f(*inputs.values())
        spreads = [(-half_unit(v), half_unit(v)) if k not in exact else (0.0,)
                   for k, v in inputs.items()]
        bound = max(abs(f(*(v + d for v, d in zip(inputs.values(), ds))) - base)
                    for ds in itertools.product(*spreads))
        bound += half_unit(printed)
        tol = atol if atol is not None else rtol * abs(printed)
        if bound > tol:
            self.skipped += 1
            if not abs(base - printed) <= bound:
                self.failures.append(f"{label}: {base:.8g} vs printed {printed} "
                                     f"beyond rounding bound {bound:.2g}")
            return
        self.checked += 1
        if not abs(base - printed) <= tol:
            self.failures.append(f"{label}: {base:.8g} vs printed {printed} ({names})")


def _adj(r2, n, k):
    return 1.0 - (1.0 - r2) * (n - 1) / (n - k)


def _ll(ssr, n):
    return -0.5 * n * (1.0 + math.log(2.0 * math.pi) + math.log(ssr / n))


def _ols_checks(c: Consistency, key, reg, n, k, has_const):
    for row in reg["coefficients"]:
        if row["std_error"]:
            c.check(f"{key} t[{row['variable']}]", lambda b, s: b / s,
                    {"coef": row["coefficient"], "se": row["std_error"]},
                    row["t_statistic"], rtol=1e-3)
    inputs = {"r2": reg["r_squared"], "n": n, "k": k}
    c.check(f"{key} adjR2", _adj, inputs, reg["adj_r_squared"], atol=1e-5, exact=("n", "k"))
    c.check(f"{key} LL", _ll, {"ssr": reg["sum_squared_resid"], "n": n},
            reg["log_likelihood"], atol=1e-2, exact=("n",))
    for crit, pen in (("aic", lambda n: 2.0), ("sc", math.log),
                      ("hq", lambda n: 2.0 * math.log(math.log(n)))):
        if reg.get(crit) is None:
            continue
        c.check(f"{key} {crit}", lambda ll, n, k, pen=pen: (-2 * ll + k * pen(n)) / n,
                {"ll": reg["log_likelihood"], "n": n, "k": k}, reg[crit],
                atol=1e-5, exact=("n", "k"))
    if has_const and k >= 2 and reg.get("f_statistic") is not None:
        c.check(f"{key} F", lambda r2, n, k: (r2 / (k - 1)) / ((1 - r2) / (n - k)),
                inputs, reg["f_statistic"], rtol=1e-3, exact=("n", "k"))


def consistency_suite(tables) -> Consistency:
    c = Consistency()
    for key, t in tables["adf"].items():
        reg = t["regression"]
        k = len(reg["coefficients"])
        has_const = any(r["variable"] == "C" for r in reg["coefficients"])
        _ols_checks(c, f"adf {key}", reg, reg["n_obs"], k, has_const)
    for key, t in tables["mlrm"].items():
        k = len(t["coefficients"])
        _ols_checks(c, f"mlrm {key}", t, t["n_obs"], k, True)
    for rid, t in tables["var"].items():
        T = t["n_obs"]
        K = len(t["regressors"][0]["coef"])
        m = len(t["regressors"])
        for r in t["regressors"]:
            for j in range(K):
                c.check(f"var {rid} t[{r['name']},{j}]", lambda b, s: b / s,
                        {"coef": r["coef"][j], "se": r["se"][j]}, r["t"][j], rtol=1e-3)
        eq = t["equations"]
        for j in range(K):
            reg = {name: values[j] for name, values in eq.items() if values is not None}
            c.check(f"var {rid} eq{j} adjR2", _adj, {"r2": reg["r_squared"], "n": T, "k": m},
                    reg["adj_r_squared"], atol=1e-5, exact=("n", "k"))
            c.check(f"var {rid} eq{j} LL", _ll, {"ssr": reg["sum_squared_resid"], "n": T},
                    reg["log_likelihood"], atol=1e-2, exact=("n",))
            for crit, pen in (("aic", lambda n: 2.0), ("sc", math.log)):
                if crit in reg:
                    c.check(f"var {rid} eq{j} {crit}",
                            lambda ll, n, k, pen=pen: (-2 * ll + k * pen(n)) / n,
                            {"ll": reg["log_likelihood"], "n": T, "k": m}, reg[crit],
                            atol=1e-5, exact=("n", "k"))
            if "f_statistic" in reg:
                c.check(f"var {rid} eq{j} F",
                        lambda r2, n, k: (r2 / (k - 1)) / ((1 - r2) / (n - k)),
                        {"r2": reg["r_squared"], "n": T, "k": m}, reg["f_statistic"],
                        rtol=1e-3, exact=("n", "k"))
        s = t["system"]
        n_coef = s["n_coefficients"]
        for crit, pen in (("aic", lambda n: 2.0), ("sc", math.log)):
            c.check(f"var {rid} system {crit}",
                    lambda ll, n, k, pen=pen: (-2 * ll + k * pen(n)) / n,
                    {"ll": s["log_likelihood"], "n": T, "k": n_coef}, s[crit],
                    atol=1e-4, exact=("n", "k"))
        c.check(f"var {rid} system LL", lambda d, T, K: system_loglik(d, int(T), int(K)),
                {"det": s["det_resid_cov"], "T": T, "K": K}, s["log_likelihood"],
                atol=0.1, exact=("T", "K"))
        # det(sigma_a) / det(sigma_u) = (T / (T - m))^K
        c.check(f"var {rid} covariance ratio",
                lambda da, du, T, m, K: (da / du) / (T / (T - m)) ** K,
                {"da": s["det_resid_cov_dof_adj"], "du": s["det_resid_cov"],
                 "T": T, "m": m, "K": K}, 1.0, atol=0.01, exact=("T", "m", "K"))
    return c


def test_criterion_1_consistency(tables):
    t0 = time.perf_counter()
    c = consistency_suite(tables)
    elapsed = time.perf_counter() - t0
    ok = not c.failures and elapsed < 1.0 and c.checked > 0
    record(1, ok, f"{c.checked} checks, {c.skipped} skipped for printed rounding, "
                  f"{len(c.failures)} mismatches, {elapsed:.3f} s"
           + ("" if not c.failures else "; first: " + c.failures[0]))
    assert not c.failures, "\n".join(c.failures)
    assert elapsed < 1.0


def test_criterion_1_worked_examples():
    # the worked values quoted alongside the criterion
    assert abs(-0.809543 / 0.09653 - -8.38671) <= 1e-3 * 8.38671
    assert abs(_adj(0.536679, 20, 2) - 0.510939) <= 1e-5
    ll = 18.43401
    assert abs((-2 * ll + 4) / 20 - -1.643401) <= 1e-5
    assert abs((-2 * ll + 2 * math.log(20)) / 20 - -1.543828) <= 1e-5
    assert abs((-2 * ll + 4 * math.log(math.log(20))) / 20 - -1.623963) <= 1e-5
    assert abs((0.536679 / 1) / ((1 - 0.536679) / 18) - 20.84993) <= 1e-3 * 20.84993
    assert abs(_ll(0.185343, 20) - 18.43401) <= 1e-2
    assert abs((-2 * 142.4779 + 24) / 20 - -13.04779) <= 1e-4
    assert abs((-2 * 142.4779 + 12 * math.log(20)) / 20 - -12.45035) <= 1e-4
    assert abs(system_loglik(1.30e-10, 20, 3) - 142.48) <= 0.1
    assert abs((2.54e-10 / 1.30e-10) / (20 / 16) ** 3 - 1.0) <= 0.01


# ---------------------------------------------------------------- criterion 2

def test_criterion_2_rao_df():
    q, df2, _, _ = rao_degrees(93, 3, 16, 1)
    ok = q == 9 and abs(df2 - 175.4) <= 0.1
    record(2, ok, f"Rao F df = ({q}, {df2:.3f}), expected (9, 175.4)")
    assert ok


# ---------------------------------------------------------------- criterion 3

def test_criterion_3_auto_maxlag():
    cases = {20: 4, 18: 3, 13: 2, 29: 7, 97: 11, 111: 12}
    got = {n: auto_maxlag(n) for n in cases}
    ok = got == cases
    record(3, ok, "auto_maxlag " + ", ".join(f"{n}->{v}" for n, v in got.items()))
    assert ok


# ---------------------------------------------------------------- criterion 4

_VARIANT = {"None": "none", "Constant": "const", "Constant, Linear Trend": "trend"}


def test_criterion_4_critical_values(tables):
    checked, misses = set(), []
    for key, t in tables["adf"].items():
        v = _VARIANT[t["exogenous"]]
        n = t["regression"]["n_obs"]
        ours = critical_values(v, n)
        for label, level in (("1%", 0.01), ("5%", 0.05), ("10%", 0.10)):
            printed = t["critical_values"][label]
            checked.add((v, n, label, printed))
            err = ours[level] - printed
            if abs(err) > 5e-3:
                misses.append(f"{key} {v} n={n} {label}: {ours[level]:.6f} vs {printed} "
                              f"({err:+.4f})")
    misses = sorted(set(misses))
    ok = not misses
    record(4, ok, f"{len(checked)} distinct printed values, {len(misses)} outside 5e-3"
           + ("" if ok else ": " + "; ".join(misses)))
    assert ok, "\n".join(misses)


# ---------------------------------------------------------------- criterion 5

def _exact_normal_equations(X: np.ndarray, y: np.ndarray) -> list[Fraction]:
    """Solve X'X b = X'y in exact rational arithmetic."""
    n, k = X.shape
    Xf = [[Fraction(float(v)) for v in row] for row in X]
    yf = [Fraction(float(v)) for v in y]
    A = [[sum(Xf[t][i] * Xf[t][j] for t in range(n)) for j in range(k)]
         + [sum(Xf[t][i] * yf[t] for t in range(n))] for i in range(k)]
    for col in range(k):
        piv = next(r for r in range(col, k) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        for r in range(k):
            if r != col and A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][k] / A[i][i] for i in range(k)]


def test_criterion_5_oracle_equivalence():
    rng = np.random.default_rng(20200325)
    worst = 0.0
    for _ in range(500):
        k = int(rng.integers(1, 5))
        n = int(rng.integers(k + 1, 13))
        X = rng.normal(size=(n, k))
        y = X @ rng.normal(size=k) + rng.normal(size=n)
        fit = fit_ols(y, X, intercept=False)
        exact = np.array([float(b) for b in _exact_normal_equations(X, y)])
        worst = max(worst, float(np.max(np.abs(fit.params - exact)) / np.max(np.abs(exact))))
    ok_ols = worst <= 1e-10

    from test_var import A1, simulate_var
    data = simulate_var(A1, 60, seed=3)
    var = fit_var(data, 2)
    X = var.regressors[:, :-1]
    rows_equal = all(
        np.array_equal(eq.params, fit_ols(data[2:, j], X, names=var.regressor_names[:-1]).params)
        and np.array_equal(eq.bse, fit_ols(data[2:, j], X, names=var.regressor_names[:-1]).bse)
        for j, eq in enumerate(var.equations)
    )
    ok = ok_ols and rows_equal
    record(5, ok, f"500 OLS instances, worst relative error {worst:.2e} (limit 1e-10); "
                  f"VAR rows identical to standalone OLS: {rows_equal}")
    assert ok


# ---------------------------------------------------------------- criterion 6

def test_criterion_6_recovery():
    from test_var import A1, simulate_var
    data = simulate_var(A1, 5000, seed=11)
    fit = fit_var(data, 1)
    K = 3
    worst = 0.0
    for j, eq in enumerate(fit.equations):
        truth = np.append(A1[j], 0.0)  # lag-1 coefficients, then the zero intercept
        worst = max(worst, float(np.max(np.abs(eq.params - truth) / eq.bse)))
    psi = orthogonal_irf(fit, 10)
    P = np.linalg.cholesky(fit.sigma_a)
    A_hat = fit.coefs[0]
    irf_err = max(float(np.max(np.abs(psi[h] - np.linalg.matrix_power(A_hat, h) @ P)))
                  for h in range(11))
    ok = worst <= 3.0 and irf_err <= 1e-8
    record(6, ok, f"max |estimate - truth| / SE = {worst:.2f} over {K * (K + 1)} coefficients; "
                  f"IRF vs A^h P max error {irf_err:.1e}")
    assert ok


# ---------------------------------------------------------------- criterion 7

def test_criterion_7_adf_size():
    rng = np.random.default_rng(7)
    reps, rejected = 2000, 0
    for _ in range(reps):
        walk = np.cumsum(rng.normal(size=100))
        res = adf_test(walk, AdfSpec("none", lag=0))
        rejected += res.statistic < res.critical_values[0.05]
    rate = rejected / reps
    ok = 0.03 <= rate <= 0.07
    record(7, ok, f"rejection rate {rate:.4f} at the 5% critical value (limits [0.03, 0.07])")
    assert ok


# ---------------------------------------------------------------- criterion 8

def test_criterion_8_lm_calibration():
    from scipy import stats

    rng = np.random.default_rng(8)
    pvalues = []
    for _ in range(500):
        noise = rng.normal(size=(100, 3))
        pvalues.append(lm_serial_test(fit_var(noise, 1), 1, AT_LAG).pvalue)
    ks = stats.kstest(pvalues, "uniform")
    ok = ks.pvalue >= 0.01
    record(8, ok, f"KS statistic {ks.statistic:.4f}, p-value {ks.pvalue:.4f} (needs >= 0.01)")
    assert ok


# ---------------------------------------------------------------- criterion 9

REPLICATION_ENV = "ECONOKIT_REPLICATION_DATA"


def test_criterion_9_replication(tables):
    root = os.environ.get(REPLICATION_ENV)
    if not root:
        record(9, None, f"conditional; set {REPLICATION_ENV} to a directory with "
                        "cases.csv, sensex.csv and fx.csv")
        pytest.skip("replication data not provided")
    from econokit.cli import DATA_FILES
    from econokit.series import load_series
    from econokit.study import growth_summary, pre_lockdown_window, run_round

    data = {v: load_series(Path(root) / f, v) for v, f in DATA_FILES.items()}
    rep = run_round("a", data["growthc"], data["gsensex"], data["gex"])
    problems = []
    for var in ("growthc", "gsensex", "gex"):
        want = tables["adf"][f"a/{var}"]["t_statistic"]
        got = rep.adf[var][-1].statistic
        if abs(got - want) > 1e-2:
            problems.append(f"ADF {var}: {got:.4f} vs {want}")
    for reg in rep.regressions:
        t = tables["mlrm"][f"a/{reg.response}"]
        for row in t["coefficients"]:
            got = reg.fit.coef(row["variable"])
            if abs(got - row["coefficient"]) > 1e-3 * abs(row["coefficient"]):
                problems.append(f"MLRM {reg.response} {row['variable']}: {got:.6f}")
    C = np.asarray(tables["correlation"]["a"], dtype=float)
    if np.max(np.abs(rep.correlation - C)) > 1e-3:
        problems.append("correlation matrix")
    mean = growth_summary(pre_lockdown_window(), data["growthc"], data["gsensex"],
                          data["gex"])["growthc"]["mean"]
    if abs(mean - 0.17804) > 1e-3:
        problems.append(f"pre-lockdown mean GROWTHC {mean:.5f}")
    ok = not problems
    record(9, ok, "round a replication" + ("" if ok else ": " + "; ".join(problems)))
    assert ok


# ---------------------------------------------------------------- criterion 10

def test_criterion_10_determinism(data_dir, tmp_path):
    from econokit.cli import main

    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}"
        for kind in ("json", "table", "csv"):
            assert main(["run", "--round", "all", "--data", str(data_dir), "--out", str(out),
                         "--format", kind]) == 0
        outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    ok = outs[0] == outs[1] and len(outs[0]) == 24
    record(10, ok, f"{len(outs[0])} report files byte-identical across two runs: "
                   f"{outs[0] == outs[1]}")
    assert ok


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
