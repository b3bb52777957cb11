import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special, stats

from econokit import distributions as d


@pytest.mark.parametrize("a,b", [(0.5, 0.5), (1.0, 3.0), (2.5, 40.0), (9.0, 175.4), (50.0, 2.0)])
def test_betainc_matches_scipy(a, b):
    for x in np.linspace(0.0, 1.0, 23):
        assert_allclose(d.betainc(a, b, x), special.betainc(a, b, x), atol=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.0, 4.5, 27.0, 100.0])
def test_gammaincc_matches_scipy(a):
    for x in [0.0, 0.01, 0.5, 1.0, 3.0, 10.0, 50.0, 150.0]:
        assert_allclose(d.gammaincc(a, x), special.gammaincc(a, x), atol=1e-12)


def test_t_and_f_tails():
    for t in [-8.4, -2.0, 0.0, 0.3, 1.840576, 5.0]:
        for df in [1, 5, 18, 95]:
            assert_allclose(d.t_two_sided(t, df), 2 * stats.t.sf(abs(t), df), atol=1e-10)
    for f in [0.0, 0.5, 2.298734, 20.84993]:
        for df1, df2 in [(1, 18), (2, 18), (9, 175.4), (54, 170.7)]:
            assert_allclose(d.f_sf(f, df1, df2), stats.f.sf(f, df1, df2), atol=1e-10)


def test_chi2_tail_and_quantile():
    for x in [0.0, 1.0, 24.33359, 108.0107]:
        for k in [1, 9, 54]:
            assert_allclose(d.chi2_sf(x, k), stats.chi2.sf(x, k), atol=1e-10)
    for p in [0.5, 0.95, 0.99]:
        assert_allclose(d.chi2_ppf(p, 9), stats.chi2.ppf(p, 9), rtol=1e-9)


def test_normal():
    assert_allclose(d.norm_cdf(1.96), 0.9750021048517795, atol=1e-12)
    assert math.isclose(d.norm_ppf(0.5), 0.0, abs_tol=1e-12)


def test_printed_probabilities():
    # coefficient and F probabilities as printed in the regression tables
    assert round(d.t_two_sided(1.840576, 18), 4) == 0.0822
    assert round(d.f_sf(20.84993, 1, 18), 6) == 0.000239
