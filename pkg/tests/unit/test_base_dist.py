#!/usr/bin/env python3
"""
Tests for the base distributions
"""

import math

import numpy as np
import pytest
from scipy import stats

from heavy_tail_framework.core.base_dist import (
    BaseDistribution,
    BaseKind,
    base_cdf,
    base_pdf,
    base_quantile,
    base_sample,
    check_probability,
    uniforms,
)
from heavy_tail_framework.exceptions import DomainError


class TestQuantile:
    def test_gaussian_median_is_zero(self, gaussian):
        assert base_quantile(gaussian, 0.5) == pytest.approx(0.0, abs=1e-15)

    def test_exponential_quantile_closed_form(self):
        expo = BaseDistribution.exponential()
        assert base_quantile(expo, 1.0 - math.exp(-1.0)) == pytest.approx(1.0, abs=1e-12)

    def test_student_t_matches_scipy(self):
        t3 = BaseDistribution.student_t(3.0)
        levels = np.array([0.001, 0.1, 0.5, 0.9, 0.999])
        np.testing.assert_allclose(base_quantile(t3, levels), stats.t.ppf(levels, 3.0), rtol=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5, float("nan")])
    def test_rejects_levels_outside_open_interval(self, gaussian, alpha):
        with pytest.raises(DomainError):
            base_quantile(gaussian, alpha)

    def test_cdf_inverts_quantile(self, gaussian):
        levels = np.linspace(0.01, 0.99, 99)
        np.testing.assert_allclose(base_cdf(gaussian, base_quantile(gaussian, levels)), levels,
                                   atol=1e-12)

    def test_scalar_in_scalar_out(self, gaussian):
        assert isinstance(base_quantile(gaussian, 0.3), float)
        assert isinstance(base_cdf(gaussian, 0.3), float)

    @pytest.mark.parametrize(
        "dist",
        [
            BaseDistribution.exponential(),
            BaseDistribution.student_t(3.0),
            BaseDistribution.student_t(10.0),
        ],
        ids=["exponential", "t3", "t10"],
    )
    def test_cdf_inverts_quantile_on_fine_grid(self, dist):
        levels = np.arange(1, 1000) / 1000.0
        error = np.abs(base_cdf(dist, base_quantile(dist, levels)) - levels)
        assert error.max() < 1e-10

    def test_gaussian_upper_critical_value(self, gaussian):
        assert base_quantile(gaussian, 0.975) == pytest.approx(1.959964, abs=1e-6)


class TestDensity:
    def test_exponential_below_support(self):
        expo = BaseDistribution.exponential()
        assert base_cdf(expo, -1.0) == 0.0
        assert base_pdf(expo, -1.0) == 0.0
        assert expo.support_lower == 0.0
        assert BaseDistribution.student_t(3.0).support_lower == float("-inf")

    def test_survival_is_tail_accurate(self, gaussian):
        # 1 - cdf would round to zero here
        assert gaussian.sf(10.0) == pytest.approx(stats.norm.sf(10.0), rel=1e-12)
        assert gaussian.sf(10.0) > 0.0

    def test_student_t_density_at_center(self):
        assert base_pdf(BaseDistribution.student_t(10.0), 0.0) == pytest.approx(0.3891084, abs=1e-7)

    @pytest.mark.parametrize(
        "dist, x",
        [
            (BaseDistribution.gaussian(), np.linspace(-4.0, 4.0, 41)),
            (BaseDistribution.exponential(), np.linspace(0.1, 6.0, 30)),
            (BaseDistribution.student_t(4.0), np.linspace(-6.0, 6.0, 41)),
        ],
        ids=["gaussian", "exponential", "t4"],
    )
    def test_density_is_derivative_of_cdf(self, dist, x):
        h = 1e-5
        numeric = (base_cdf(dist, x + h) - base_cdf(dist, x - h)) / (2 * h)
        np.testing.assert_allclose(base_pdf(dist, x), numeric, atol=1e-6)


class TestSampling:
    def test_uniforms_are_strictly_inside(self):
        u = uniforms(10_000, seed=0)
        assert np.all(u > 0.0) and np.all(u < 1.0)

    def test_same_seed_same_draws(self, gaussian):
        np.testing.assert_array_equal(base_sample(gaussian, 100, 7), base_sample(gaussian, 100, 7))

    def test_different_seeds_differ(self, gaussian):
        assert not np.array_equal(base_sample(gaussian, 100, 7), base_sample(gaussian, 100, 8))

    def test_zero_size_rejected(self, gaussian):
        with pytest.raises(DomainError):
            base_sample(gaussian, 0, 1)

    def test_negative_seed_rejected(self, gaussian):
        with pytest.raises(DomainError):
            base_sample(gaussian, 10, -1)

    def test_sample_is_quantile_of_uniforms(self):
        t5 = BaseDistribution.student_t(5.0)
        np.testing.assert_array_equal(t5.sample(50, 3), t5.quantile(uniforms(50, 3)))

    def test_exponential_sample_nonnegative(self):
        draws = BaseDistribution.exponential().sample(1000, 2)
        assert np.all(draws >= 0.0)

    @pytest.mark.parametrize(
        "dist",
        [
            BaseDistribution.gaussian(),
            BaseDistribution.exponential(),
            BaseDistribution.student_t(3.0),
        ],
        ids=["gaussian", "exponential", "t3"],
    )
    def test_samples_pass_ks_at_one_percent(self, dist):
        n = 10_000
        draws = base_sample(dist, n, 21)
        assert stats.kstest(draws, dist.cdf).statistic < 1.63 / np.sqrt(n)


class TestParsing:
    @pytest.mark.parametrize(
        "label,kind,dof",
        [
            ("gaussian", BaseKind.GAUSSIAN, None),
            ("normal", BaseKind.GAUSSIAN, None),
            ("exponential", BaseKind.EXPONENTIAL, None),
            ("t:3", BaseKind.STUDENT_T, 3.0),
            ("T:2.5", BaseKind.STUDENT_T, 2.5),
        ],
    )
    def test_parse(self, label, kind, dof):
        base = BaseDistribution.parse(label)
        assert base.kind is kind
        assert base.dof == dof

    @pytest.mark.parametrize("label", ["cauchy", "t:", "t:abc", "t:-1"])
    def test_parse_rejects(self, label):
        with pytest.raises(DomainError):
            BaseDistribution.parse(label)

    def test_dict_round_trip(self):
        t3 = BaseDistribution.student_t(3.0)
        assert BaseDistribution.from_dict(t3.to_dict()) == t3
        assert t3.label == "t:3"

    def test_gaussian_takes_no_dof(self):
        with pytest.raises(DomainError):
            BaseDistribution(BaseKind.GAUSSIAN, 3.0)


def test_check_probability_reports_first_bad_value():
    with pytest.raises(DomainError) as info:
        check_probability([0.2, 1.0, 0.5])
    assert info.value.details["alpha"] == 1.0


def test_tail_index():
    assert BaseDistribution.student_t(4.0).tail_index == 4.0
    assert BaseDistribution.gaussian().tail_index is None
