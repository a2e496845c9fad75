import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import stats

from pathrisk.stats import empirical_cdf, histogram, summarize

samples = st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=40).map(np.array)


def test_symmetric_three_points():
    s = summarize([-1.0, 0.0, 1.0])
    assert s.skewness == 0.0
    assert s.mean == 0.0
    assert s.sd == pytest.approx(math.sqrt(2 / 3))
    assert s.excess_kurtosis == pytest.approx(1.5 - 3.0)


def test_even_median():
    assert summarize([4.0, 1.0, 3.0, 2.0]).median == 2.5


def test_normal_kurtosis():
    x = np.random.default_rng(0).standard_normal(1_000_000)
    s = summarize(x)
    assert abs(s.excess_kurtosis) <= 0.05
    assert abs(s.skewness) <= 0.02


@settings(max_examples=100, deadline=None)
@given(samples)
def test_matches_scipy(x):
    assume(np.ptp(x) > 1e-6 * max(1.0, np.max(np.abs(x))))
    s = summarize(x)
    assert s.skewness == pytest.approx(stats.skew(x), rel=1e-6, abs=1e-9)
    assert s.excess_kurtosis == pytest.approx(stats.kurtosis(x), rel=1e-6, abs=1e-9)
    assert s.sd == pytest.approx(np.std(x), rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(samples, st.floats(0.1, 10), st.floats(-5, 5))
def test_affine_equivariance(x, a, b):
    assume(np.ptp(x) > 1e-3)
    s, t = summarize(x), summarize(a * x + b)
    assert t.mean == pytest.approx(a * s.mean + b, abs=1e-9 * (1 + abs(b) + a * np.max(np.abs(x))))
    assert t.sd == pytest.approx(a * s.sd, rel=1e-9)
    assert t.skewness == pytest.approx(s.skewness, rel=1e-6, abs=1e-7)
    assert t.excess_kurtosis == pytest.approx(s.excess_kurtosis, rel=1e-6, abs=1e-7)
    u = summarize(-x)
    assert u.skewness == pytest.approx(-s.skewness, abs=1e-9)


def test_degenerate():
    s = summarize([0.3, 0.3, 0.3])
    assert s.degenerate and s.sd == 0.0
    assert math.isnan(s.skewness) and math.isnan(s.excess_kurtosis)
    assert s.median == 0.3


def test_too_short():
    with pytest.raises(ValueError):
        summarize([1.0])


def test_histogram_two_points():
    h = histogram([0.0, 1.0], 2)
    np.testing.assert_array_equal(h.density, [1.0, 1.0])
    np.testing.assert_array_equal(h.edges, [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(h.centers, [0.25, 0.75])


@settings(max_examples=60, deadline=None)
@given(samples, st.integers(1, 60))
def test_histogram_integrates_to_one(x, k):
    assume(np.ptp(x) > 1e-6)
    h = histogram(x, k)
    assert float(np.sum(h.density * np.diff(h.edges))) == pytest.approx(1.0, rel=1e-12)


def test_histogram_bins():
    with pytest.raises(ValueError):
        histogram([1.0, 2.0], 0)


def test_empirical_cdf():
    f = empirical_cdf([3.0, 1.0, 2.0, 2.0])
    assert f.cdf(0.5) == 0.0
    assert f.cdf(2.0) == 0.75
    assert f.cdf(3.0) == 1.0
