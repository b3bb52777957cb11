"""Synthetic input data shaped like the study's three series."""

from __future__ import annotations

from datetime import date, timedelta
from pathlib import Path

import numpy as np

from econokit.series import DatedSeries, write_series

FIRST_DAY = date(2020, 3, 1)
LAST_DAY = date(2020, 7, 3)
HOLIDAYS = {date(2020, 4, 10), date(2020, 5, 25)}


def synthetic_levels(seed: int = 7) -> dict[str, DatedSeries]:
    rng = np.random.default_rng(seed)
    days = [FIRST_DAY + timedelta(days=i) for i in range((LAST_DAY - FIRST_DAY).days + 1)]
    n = len(days)
    t = np.arange(n)
    g = np.clip(0.25 * np.exp(-t / 35.0) + 0.02 + rng.normal(0, 0.02, n), 0.003, None)
    cases = 30.0 * np.cumprod(1.0 + g)
    trading = [i for i, d in enumerate(days) if d.weekday() < 5 and d not in HOLIDAYS]
    shocks = rng.normal(0, 1, (len(trading), 2))
    r_sensex = 0.02 * shocks[:, 0]
    r_fx = 0.004 * (0.4 * shocks[:, 0] + shocks[:, 1])
    sensex = 38000.0 * np.cumprod(1.0 + r_sensex)
    fx = 74.0 * np.cumprod(1.0 + r_fx)
    tdays = [days[i] for i in trading]
    return {
        "growthc": DatedSeries("growthc", days, np.round(cases)),
        "gsensex": DatedSeries("gsensex", tdays, np.round(sensex, 2)),
        "gex": DatedSeries("gex", tdays, np.round(fx, 4)),
    }


def write_dataset(directory: str | Path, seed: int = 7) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    levels = synthetic_levels(seed)
    for name, fname in (("growthc", "cases.csv"), ("gsensex", "sensex.csv"), ("gex", "fx.csv")):
        write_series(levels[name], directory / fname)
    return directory
