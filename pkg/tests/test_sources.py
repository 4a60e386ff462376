import math

import numpy as np
import pytest

from fdbss import InvalidInputError
from fdbss.sources import (
    KINDS,
    POWER_COEFFS,
    dependent_pair,
    mixture_table,
    sample,
    spec_for,
)

from oracles import mixture_central_moments, sample_skew_kurtosis

N_BIG = 1_000_000


class TestBasics:
    @pytest.mark.parametrize("kind", list(KINDS))
    def test_deterministic_per_seed(self, kind):
        a = sample(kind, 500, 42)
        b = sample(kind, 500, 42)
        assert np.array_equal(a, b)
        c = sample(kind, 500, 43)
        assert not np.array_equal(a, c)

    @pytest.mark.parametrize("kind", list(KINDS))
    def test_in_sample_standardization(self, kind):
        x = sample(kind, 2000, 7)
        assert abs(x.mean()) < 1e-12
        assert abs(x.std() - 1.0) < 1e-12
        assert np.all(np.isfinite(x))

    def test_unknown_kind_rejected(self):
        with pytest.raises(InvalidInputError):
            sample("z", 10, 0)
        with pytest.raises(InvalidInputError):
            spec_for("z")

    def test_n_validation(self):
        with pytest.raises(InvalidInputError):
            sample("c", 0, 0)


class TestPowerMethod:
    def test_polynomial_reconstruction(self):
        b, c, d = POWER_COEFFS["s"]
        z = np.random.default_rng(11).standard_normal(1000)
        expected = -c + b * z + c * z**2 + d * z**3
        raw = sample("s", 1000, 11, standardize=False)
        assert np.allclose(raw, expected, rtol=1e-12)

    def test_left_skewed_targets(self):
        x = sample("s", N_BIG, 1)
        skew, kurt = sample_skew_kurtosis(x)
        assert skew == pytest.approx(-0.25, abs=0.15)
        assert kurt == pytest.approx(3.75, abs=0.15)

    def test_right_skewed_targets(self):
        x = sample("t", N_BIG, 2)
        skew, kurt = sample_skew_kurtosis(x)
        assert skew == pytest.approx(0.75, abs=0.15)
        assert kurt == pytest.approx(0.0, abs=0.15)


class TestAnalyticMoments:
    """Raw (unstandardized) draws against analytic moments, 3 standard errors.

    SE(mean) = sqrt(m2/n); SE(variance) = sqrt((m4 - m2^2)/n).
    """

    def _check(self, kind, mean, m2, m4, n=N_BIG, seed=3):
        x = sample(kind, n, seed, standardize=False)
        assert x.mean() == pytest.approx(mean, abs=3 * math.sqrt(m2 / n))
        assert x.var() == pytest.approx(m2, abs=3 * math.sqrt((m4 - m2**2) / n))

    def test_uniform(self):
        # U(-sqrt3, sqrt3): m2 = 1, m4 = 9/5
        self._check("c", 0.0, 1.0, 1.8)

    def test_laplace(self):
        # unit diversity: m2 = 2, m4 = 24
        self._check("b", 0.0, 2.0, 24.0)

    def test_exponential(self):
        # Exp(1): mean 1, central m2 = 1, m4 = 9
        self._check("e", 1.0, 1.0, 9.0)

    def test_gaussian(self):
        self._check("u", 0.0, 1.0, 3.0)

    @pytest.mark.parametrize("kind", list("fghijklmnopqr"))
    def test_mixture_kinds(self, kind):
        w, mu, s = mixture_table()[kind]
        fam = "laplace" if kind == "f" else "gauss"
        mean, m2, _, m4 = mixture_central_moments(w, mu, s, family=fam)
        self._check(kind, mean, m2, m4)

    def test_student_t3(self):
        # variance 3; kurtosis infinite, so check mean and median
        x = sample("a", N_BIG, 4, standardize=False)
        assert x.mean() == pytest.approx(0.0, abs=3 * math.sqrt(3 / N_BIG))
        f0 = math.gamma(2.0) / (math.sqrt(3 * math.pi) * math.gamma(1.5))
        assert np.median(x) == pytest.approx(0.0, abs=3 / (2 * f0 * math.sqrt(N_BIG)))

    def test_student_t5(self):
        # variance 5/3, fourth central moment 25
        x = sample("d", N_BIG, 5, standardize=False)
        m2 = 5.0 / 3.0
        assert x.mean() == pytest.approx(0.0, abs=3 * math.sqrt(m2 / N_BIG))
        assert x.var() == pytest.approx(m2, abs=3 * math.sqrt((25 - m2**2) / N_BIG))
        f0 = math.gamma(3.0) / (math.sqrt(5 * math.pi) * math.gamma(2.5))
        assert np.median(x) == pytest.approx(0.0, abs=3 / (2 * f0 * math.sqrt(N_BIG)))


class TestShapeStatistics:
    def test_uniform_excess_kurtosis(self):
        _, kurt = sample_skew_kurtosis(sample("c", 100_000, 6))
        assert kurt == pytest.approx(-1.2, abs=0.05)

    def test_laplace_excess_kurtosis(self):
        _, kurt = sample_skew_kurtosis(sample("b", N_BIG, 7))
        assert kurt == pytest.approx(3.0, abs=0.3)

    def test_exponential_shape(self):
        skew, kurt = sample_skew_kurtosis(sample("e", N_BIG, 8))
        assert skew == pytest.approx(2.0, abs=0.05)
        assert kurt == pytest.approx(6.0, abs=0.5)


class TestDependentPair:
    def test_rows_functionally_dependent(self):
        pair = dependent_pair(400, 9)
        assert np.array_equal(pair[1], np.sin(pair[0] / 20.0 * math.pi))

    def test_deterministic(self):
        assert np.array_equal(dependent_pair(100, 10), dependent_pair(100, 10))

    def test_first_row_is_standardized_uniform(self):
        pair = dependent_pair(500, 11)
        assert np.array_equal(pair[0], sample("c", 500, 11))

    def test_needs_two_samples(self):
        with pytest.raises(InvalidInputError):
            dependent_pair(1, 0)


def test_mixture_table_contents():
    table = mixture_table()
    assert set(table) == set("fghijklmnopqr")
    for kind, (w, mu, s) in table.items():
        assert len(w) == len(mu) == len(s)
        assert sum(w) == pytest.approx(1.0, abs=1e-12)
        assert all(v > 0 for v in s)
        assert len(w) in (2, 4)
