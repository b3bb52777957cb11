"""Growth-rate econometrics: OLS, ADF unit-root tests, VAR estimation and diagnostics."""

from econokit.errors import (ConfigError, CoverageError, DataError, DegenerateInputError,
                             DomainError, EconokitError, InsufficientDataError, ParseError,
                             SingularityError)
from econokit.linreg import OlsFit, fit_ols
from econokit.series import DatedSeries, StudyFrame, StudyWindow, build_frame, load_series
from econokit.study import (RoundConfig, RoundReport, correlation_matrix, default_config,
                             load_config, round_windows, run_round, summary_statistics)
from econokit.unitroot import AdfResult, AdfSpec, adf_test, auto_maxlag, mackinnon_critical
from econokit.var import VarFit, fit_var
from econokit.var_diagnostics import cholesky_irf, lag_order_table, lm_serial_test, return_horizon

__version__ = "0.1.0"
