import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from pathrisk.paths import PathEnsemble
from pathrisk.risk import (
    Distortion,
    EmpiricalDistribution,
    InsufficientTailSample,
    avar,
    avar_order_stat,
    distorted_expectation,
    process_risk,
    var,
    weighted_var,
)

from .conftest import distributions, ensembles

D4 = EmpiricalDistribution.from_sample([-3.0, -1.0, 0.0, 2.0])
levels = st.floats(1e-3, 1.0)


def avar_rockafellar_uryasev(x, w, gamma):
    """Oracle: min_c (1/gamma) E[(c - Y)^+] - c; the minimum sits at an atom."""
    x, w = np.asarray(x), np.asarray(w)
    return min(np.dot(w, np.maximum(c - x, 0.0)) / gamma - c for c in x)


def var_by_enumeration(x, w, s):
    order = np.argsort(x)
    total = 0.0
    for i in order:
        total += w[i]
        if total >= s - 1e-15:
            return -x[i]
    return -x[order[-1]]


class TestEmpiricalDistribution:
    def test_ties_merged_and_sorted(self):
        d = EmpiricalDistribution([2.0, -1.0, 2.0], [0.25, 0.5, 0.25])
        np.testing.assert_array_equal(d.outcomes, [-1.0, 2.0])
        np.testing.assert_array_equal(d.weights, [0.5, 0.5])

    def test_cdf_right_continuous(self):
        assert D4.cdf(-3.5) == 0.0
        assert D4.cdf(-3.0) == 0.25
        assert D4.cdf(2.0) == 1.0

    @pytest.mark.parametrize("w", [[0.5, 0.4], [1.0, 0.0], [1.2, -0.2]])
    def test_bad_weights(self, w):
        with pytest.raises(ValueError):
            EmpiricalDistribution([0.0, 1.0], w)

    def test_csv_roundtrip(self, tmp_path):
        d = EmpiricalDistribution([0.1, -0.7, 3.0], [0.2, 0.3, 0.5])
        d.to_csv(tmp_path / "d.csv")
        back = EmpiricalDistribution.from_csv(tmp_path / "d.csv")
        np.testing.assert_array_equal(back.outcomes, d.outcomes)
        np.testing.assert_array_equal(back.weights, d.weights)


class TestVaR:
    def test_examples(self):
        assert var(D4, 0.25) == 3.0
        assert var(D4, 1.0) == -2.0
        assert var(EmpiricalDistribution.from_sample([1.7]), 0.3) == -1.7

    def test_lower_quantile_at_atom_boundary(self):
        assert var(D4, 0.5) == 1.0
        assert var(D4, 0.5 + 1e-9) == 0.0

    @pytest.mark.parametrize("s", [0.0, -0.1, 1.1])
    def test_level_range(self, s):
        with pytest.raises(ValueError):
            var(D4, s)

    @given(distributions(), levels)
    def test_matches_enumeration(self, xw, s):
        x, w = xw
        assert var(EmpiricalDistribution(x, w), s) == var_by_enumeration(x, w, s)


class TestAVaR:
    def test_examples(self):
        assert avar(D4, 0.5) == pytest.approx(2.0)
        assert avar(D4, 1.0) == pytest.approx(0.5)
        assert avar(EmpiricalDistribution.from_sample([0.3]), 0.07) == pytest.approx(-0.3)

    def test_atom_split(self):
        # worst 0.3 of mass: 0.25 at -3 and 0.05 at -1
        assert avar(D4, 0.3) == pytest.approx((0.25 * 3 + 0.05 * 1) / 0.3)

    @given(distributions(), levels)
    def test_matches_rockafellar_uryasev(self, xw, gamma):
        x, w = xw
        assert avar(EmpiricalDistribution(x, w), gamma) == pytest.approx(
            avar_rockafellar_uryasev(x, w, gamma), rel=1e-9, abs=1e-9
        )

    @given(distributions(), levels, levels)
    def test_nonincreasing_in_level(self, xw, g1, g2):
        d = EmpiricalDistribution(*xw)
        lo, hi = sorted((g1, g2))
        assert avar(d, lo) >= avar(d, hi) - 1e-12

    @given(distributions(), levels)
    def test_dominates_var(self, xw, g):
        d = EmpiricalDistribution(*xw)
        assert avar(d, g) >= var(d, g) - 1e-12

    @given(distributions())
    def test_full_level_is_minus_mean(self, xw):
        d = EmpiricalDistribution(*xw)
        assert avar(d, 1.0) == pytest.approx(-d.mean(), abs=1e-12)

    @given(distributions(), levels, st.floats(0.01, 100), st.floats(-10, 10))
    def test_homogeneous_and_translation(self, xw, g, lam, m):
        d = EmpiricalDistribution(*xw)
        assert avar(d.scale(lam), g) == pytest.approx(lam * avar(d, g), rel=1e-10, abs=1e-10)
        assert avar(d.shift(m), g) == pytest.approx(avar(d, g) - m, rel=1e-10, abs=1e-10)

    @settings(max_examples=200)
    @given(st.data(), levels)
    def test_subadditive_on_joint_samples(self, data, g):
        n = data.draw(st.integers(1, 10))
        x = np.array(data.draw(st.lists(st.floats(-5, 5), min_size=n, max_size=n)))
        y = np.array(data.draw(st.lists(st.floats(-5, 5), min_size=n, max_size=n)))
        w = np.full(n, 1.0 / n)
        lhs = avar(EmpiricalDistribution(x + y, w), g)
        rhs = avar(EmpiricalDistribution(x, w), g) + avar(EmpiricalDistribution(y, w), g)
        assert lhs <= rhs + 1e-9


class TestOrderStatistic:
    def test_examples(self):
        assert avar_order_stat([-3, -1, 0, 2], 0.5) == 2.0
        sample = np.array([0.4, -0.2, 1.0])
        assert avar_order_stat(sample, 1.0) == pytest.approx(-sample.mean())

    def test_ten_smallest_of_thousand(self, rng):
        sample = rng.normal(size=1000)
        want = -np.sort(sample)[:10].mean()
        assert avar_order_stat(sample, 0.01) == pytest.approx(want, rel=1e-14)

    def test_floor_of_n_gamma(self):
        # n * gamma = 2.9 -> k = 2
        assert avar_order_stat([-5.0, -4.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0], 0.29) == 4.5

    def test_insufficient_tail(self):
        with pytest.raises(InsufficientTailSample):
            avar_order_stat([1.0, 2.0], 0.3)

    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=40), st.data())
    def test_matches_atom_split_when_n_gamma_integer(self, sample, data):
        n = len(sample)
        k = data.draw(st.integers(1, n))
        got = avar_order_stat(sample, k / n)
        assert got == pytest.approx(avar(EmpiricalDistribution.from_sample(sample), k / n), rel=1e-12, abs=1e-12)


class TestDistortion:
    def test_shape(self):
        psi = Distortion(0.25)
        np.testing.assert_allclose(psi([0.0, 0.125, 0.25, 0.9, 1.0]), [0, 0.5, 1, 1, 1])
        with pytest.raises(ValueError):
            Distortion(0.0)

    def test_examples(self):
        assert distorted_expectation(D4, Distortion(1.0)) == pytest.approx(-D4.mean())
        assert distorted_expectation(D4, Distortion(0.5)) == pytest.approx(2.0)
        assert distorted_expectation(EmpiricalDistribution.from_sample([4.0]), Distortion(0.3)) == -4.0

    @given(distributions(), levels)
    def test_equals_avar(self, xw, g):
        d = EmpiricalDistribution(*xw)
        assert abs(distorted_expectation(d, Distortion(g)) - avar(d, g)) <= 1e-12 * max(1, np.abs(d.outcomes).max())


class TestWeightedVaR:
    def test_examples(self):
        assert weighted_var(D4, [0.3], [1.0]) == avar(D4, 0.3)
        assert weighted_var(D4, {0.5: 0.5, 1.0: 0.5}) == pytest.approx(1.25)
        assert weighted_var(EmpiricalDistribution.from_sample([2.0]), [0.1, 0.7], [0.4, 0.6]) == pytest.approx(-2.0)

    def test_atoms_in_unit_interval(self):
        with pytest.raises(ValueError):
            weighted_var(D4, [0.0, 0.5], [0.5, 0.5])
        with pytest.raises(ValueError):
            weighted_var(D4, [0.5], [0.9])


class TestProcessRisk:
    def test_running_min_avar(self, two_path):
        # running minima {-0.1, -0.3}, equal weights: worst half is -0.3
        assert process_risk(two_path, "running_min", lambda d: avar(d, 0.5)) == pytest.approx(0.3)

    def test_terminal_mean(self, two_path):
        assert process_risk(two_path, "terminal", lambda d: -d.mean()) == pytest.approx(-0.3)

    @pytest.mark.parametrize("gamma", [0.01, 0.3, 1.0])
    def test_constant_ensemble(self, gamma):
        e = PathEnsemble.from_arrays(np.full((3, 4), 0.7))
        assert process_risk(e, "running_min", lambda d: avar(d, gamma)) == pytest.approx(-0.7)

    def test_other_transforms(self, two_path):
        assert process_risk(two_path, "max_drawdown", lambda d: d.mean()) == pytest.approx(0.5)
        assert process_risk(two_path, "time_average", lambda d: d.mean()) == pytest.approx(
            np.mean([np.trapezoid(r, dx=1.0) / 4 for r in two_path.values])
        )
        with pytest.raises(ValueError):
            process_risk(two_path, "nonsense", lambda d: 0.0)

    @given(ensembles(), st.data(), levels)
    def test_monotone_in_paths(self, e, data, g):
        bump = np.array(data.draw(st.lists(st.floats(0, 3), min_size=e.values.size, max_size=e.values.size)))
        bigger = e.with_values(e.values + bump.reshape(e.values.shape))
        rho = lambda d: avar(d, g)
        assert process_risk(e, "running_min", rho) >= process_risk(bigger, "running_min", rho) - 1e-12
