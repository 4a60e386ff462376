import math

import numpy as np
import pytest

from fdbss import (
    BandwidthSelector,
    DegenerateComponentError,
    GridTooCoarseError,
    InvalidInputError,
    grid_lp_norm,
    kde_eval,
    lp_fd_grid,
    normalize,
    qmi_ed,
    rot_bandwidth,
)
from fdbss.sources import dependent_pair, sample

SQRT_2PI = math.sqrt(2 * math.pi)


class TestNormalize:
    def test_symmetric_pair_fixed_point(self):
        out = normalize(np.array([[-1.0, 1.0]]))
        assert np.array_equal(out, np.array([[-1.0, 1.0]]))

    def test_constant_row_rejected(self):
        with pytest.raises(DegenerateComponentError):
            normalize(np.array([[2.0, 2.0, 2.0], [1.0, 2.0, 3.0]]))

    def test_recomputed_statistics(self):
        rng = np.random.default_rng(0)
        out = normalize(rng.normal(3.0, 5.0, size=(3, 200)))
        assert np.all(np.abs(out.mean(axis=1)) < 1e-12)
        assert np.all(np.abs(out.std(axis=1) - 1.0) < 1e-12)

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(2, 50)) * 7 + 2
        once = normalize(x)
        assert np.max(np.abs(normalize(once) - once)) < 1e-12

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            normalize(np.array([[1.0, np.inf]]))


class TestRotBandwidth:
    def test_single_sample_rejected(self):
        with pytest.raises(DegenerateComponentError):
            rot_bandwidth([1.0])

    def test_direct_arithmetic(self):
        x = np.tile([-1.0, 1.0], 512)  # population sd exactly 1, N = 1024
        assert rot_bandwidth(x) == pytest.approx(1.06 * 1024 ** -0.2, rel=1e-12)
        assert rot_bandwidth(x) == pytest.approx(1.06 / 4.0, rel=1e-12)  # 1024**0.2 == 4

    def test_scale_homogeneity(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=100)
        for c in (0.25, 3.0):
            assert rot_bandwidth(c * x) == pytest.approx(c * rot_bandwidth(x), rel=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateComponentError):
            rot_bandwidth(np.ones(50))


class TestBandwidthSelector:
    def test_rot_kind(self):
        x = np.random.default_rng(3).normal(size=64)
        assert BandwidthSelector.rot().select(x) == rot_bandwidth(x)

    def test_fixed_kind(self):
        assert BandwidthSelector.fixed(0.42).select([1.0, 2.0]) == 0.42
        with pytest.raises(InvalidInputError):
            BandwidthSelector.fixed(-1.0)

    def test_plugin_kind(self):
        sel = BandwidthSelector.plugin(lambda s: 2.0 * s.std(), name="twice-sd")
        x = np.random.default_rng(4).normal(size=64)
        assert sel.select(x) == pytest.approx(2.0 * x.std())
        bad = BandwidthSelector.plugin(lambda s: -1.0)
        with pytest.raises(InvalidInputError):
            bad.select(x)


class TestKdeEval:
    def test_single_sample_peak(self):
        assert kde_eval([0.0], 1.0, 0.0) == pytest.approx(1 / SQRT_2PI, rel=1e-14)

    def test_linearity_in_samples(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=12)
        pts = np.linspace(-3, 3, 7)
        combined = kde_eval(x, 0.8, pts)
        averaged = np.mean([kde_eval([xi], 0.8, pts) for xi in x], axis=0)
        assert np.allclose(combined, averaged, rtol=1e-12)

    def test_integrates_to_one(self):
        rng = np.random.default_rng(6)
        x = rng.normal(size=200)
        sigma = rot_bandwidth(x)
        grid = np.linspace(x.min() - 8 * sigma, x.max() + 8 * sigma, 4001)
        assert np.trapezoid(kde_eval(x, sigma, grid), grid) == pytest.approx(1.0, abs=1e-4)

    def test_nonnegative(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=30)
        assert np.all(kde_eval(x, 0.5, np.linspace(-10, 10, 101)) >= 0)


class TestLpFdGrid:
    def test_zero_difference_norm(self):
        assert grid_lp_norm(np.zeros((16, 16)), (0.1, 0.1), 1.0) == 0.0

    def test_independent_vs_dependent_statistical(self):
        ind_vals, dep_vals = [], []
        for seed in range(20):
            x1 = sample("c", 300, [seed, 0])
            x2 = sample("c", 300, [seed, 1])
            sigma = rot_bandwidth(x1)
            ind_vals.append(lp_fd_grid(np.vstack([x1, x2]), sigma, p=2.0))
            dep_vals.append(lp_fd_grid(dependent_pair(300, [seed, 2]), sigma, p=2.0))
        assert np.mean(dep_vals) >= 5.0 * np.mean(ind_vals)

    def test_p2_squared_matches_qmi(self):
        rng = np.random.default_rng(8)
        x = rng.uniform(-1, 1, size=(2, 300))
        z = normalize(x)
        sigma = rot_bandwidth(z[0])
        val = lp_fd_grid(x, sigma, p=2.0)
        assert val**2 == pytest.approx(qmi_ed(z, sigma).qmi, rel=5e-2)

    def test_scale_invariance(self):
        rng = np.random.default_rng(9)
        x = rng.normal(size=(2, 120))
        scaled = np.diag([3.0, 0.25]) @ x
        assert lp_fd_grid(scaled, 0.4) == pytest.approx(lp_fd_grid(x, 0.4), abs=1e-10)

    def test_swap_invariance(self):
        rng = np.random.default_rng(10)
        x = rng.normal(size=(2, 120))
        assert lp_fd_grid(x[::-1], 0.4) == pytest.approx(lp_fd_grid(x, 0.4), abs=1e-10)

    def test_grid_too_coarse(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(2, 50))
        with pytest.raises(GridTooCoarseError):
            lp_fd_grid(x, 0.05, grid=16)

    def test_p_below_one_rejected(self):
        rng = np.random.default_rng(12)
        with pytest.raises(InvalidInputError):
            lp_fd_grid(rng.normal(size=(2, 40)), 0.4, p=0.5)

    def test_needs_two_rows(self):
        rng = np.random.default_rng(13)
        with pytest.raises(InvalidInputError):
            lp_fd_grid(rng.normal(size=(3, 40)), 0.4)
