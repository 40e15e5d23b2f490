#!/usr/bin/env python3
"""
Tests for the generated distribution
"""

import numpy as np
import pytest
from scipy import integrate, stats

from heavy_tail_framework.core.base_dist import BaseDistribution
from heavy_tail_framework.core.generated import (
    GeneratedDistribution,
    gen_cdf,
    gen_moment,
    gen_nll,
    gen_pdf,
    gen_quantile,
    gen_sample,
)
from heavy_tail_framework.core.gof import ks_measure
from heavy_tail_framework.core.transform import TransformSpec, eval_f
from heavy_tail_framework.exceptions import DomainError
from heavy_tail_framework.families import ExpM1OverX, PgmlDown, PgmlUp, Zero

LEVELS = np.arange(1, 100) / 100.0


def test_quantile_cdf_round_trip(pgml_dist):
    assert np.max(np.abs(gen_cdf(pgml_dist, gen_quantile(pgml_dist, LEVELS)) - LEVELS)) < 1e-8


def test_median_is_mu_for_gaussian_base(pgml_dist):
    assert gen_quantile(pgml_dist, 0.5) == pytest.approx(-1.0, abs=1e-12)


def test_quantile_is_strictly_increasing(pgml_dist):
    assert np.all(np.diff(gen_quantile(pgml_dist, LEVELS)) > 0.0)


def test_quantile_rejects_bad_levels(pgml_dist):
    with pytest.raises(DomainError):
        gen_quantile(pgml_dist, 1.0)


def test_linear_case_is_gaussian(gaussian, linear_spec):
    dist = GeneratedDistribution(gaussian, linear_spec)
    normal = stats.norm(loc=0.3, scale=1.2 * 1.5)
    ys = np.linspace(-4.0, 4.0, 17)
    np.testing.assert_allclose(gen_cdf(dist, ys), normal.cdf(ys), atol=1e-12)
    np.testing.assert_allclose(gen_pdf(dist, ys), normal.pdf(ys), rtol=1e-9)


@pytest.mark.parametrize("fixture", ["pgml_spec", "linear_spec"])
def test_density_integrates_to_one(gaussian, fixture, request):
    dist = GeneratedDistribution(gaussian, request.getfixturevalue(fixture))
    lower, upper = dist.quantile([1e-6, 1.0 - 1e-6])
    mass, _ = integrate.quad(lambda y: float(dist.pdf(y)), lower, upper, limit=200)
    assert mass == pytest.approx(1.0 - 2e-6, abs=1e-4)


def test_pdf_matches_cdf_derivative(pgml_dist):
    ys = np.linspace(-4.0, 2.0, 13)
    h = 1e-5
    numeric = (pgml_dist.cdf(ys + h) - pgml_dist.cdf(ys - h)) / (2 * h)
    np.testing.assert_allclose(pgml_dist.pdf(ys), numeric, rtol=1e-5)


def test_sample_is_transformed_base_sample(gaussian, pgml_dist, pgml_spec):
    draws = gen_sample(pgml_dist, 1000, seed=42)
    np.testing.assert_array_equal(draws, eval_f(pgml_spec, gaussian.sample(1000, 42)))


def test_sample_reproducible(pgml_dist):
    np.testing.assert_array_equal(gen_sample(pgml_dist, 10, 3), gen_sample(pgml_dist, 10, 3))


def test_invalid_transform_is_rejected(gaussian):
    with pytest.raises(DomainError):
        GeneratedDistribution(gaussian, TransformSpec(0.0, 1.0, PgmlDown(), Zero()))


def test_nll_of_linear_case_matches_normal(gaussian, linear_spec):
    dist = GeneratedDistribution(gaussian, linear_spec)
    data = np.linspace(-2.0, 2.0, 41)
    expected = -np.mean(stats.norm(0.3, 1.8).logpdf(data))
    assert gen_nll(dist, data).value == pytest.approx(expected, rel=1e-9)


def test_nll_excludes_points_outside_support():
    expo = BaseDistribution.exponential()
    dist = GeneratedDistribution(expo, TransformSpec(0.0, 1.0, ExpM1OverX(0.5), Zero()))
    result = gen_nll(dist, np.array([-1.0, 0.5, 1.0, 2.0]))
    assert result.n_excluded == 1
    assert result.n_used == 3
    assert np.isfinite(result.value)


def test_exponential_expm1_closed_form():
    # f(x) = e^(x/2) - 1 + x over a standard exponential base
    expo = BaseDistribution.exponential()
    dist = GeneratedDistribution(expo, TransformSpec(0.0, 1.0, ExpM1OverX(0.5), Zero()))
    x = float(expo.quantile(0.9))
    assert dist.quantile(0.9) == pytest.approx(np.exp(x / 2) - 1 + x, rel=1e-12)


def test_moments_of_linear_case(gaussian, linear_spec):
    dist = GeneratedDistribution(gaussian, linear_spec)
    assert gen_moment(dist, 1) == pytest.approx(0.3, abs=1e-8)
    assert gen_moment(dist, 2) == pytest.approx(0.3 ** 2 + 1.8 ** 2, rel=1e-8)


def test_moment_matches_sample_mean(pgml_dist):
    draws = pgml_dist.sample(200_000, seed=9)
    assert gen_moment(pgml_dist, 1) == pytest.approx(draws.mean(), abs=0.01)


def test_nll_prefers_true_scale(gaussian, pgml_spec, pgml_dist):
    draws = pgml_dist.sample(10_000, seed=13)
    widened = GeneratedDistribution(gaussian, pgml_spec.with_parameters({"sigma": 1.0}))
    assert gen_nll(pgml_dist, draws).value <= gen_nll(widened, draws).value


def test_nll_agrees_with_independent_entropy_estimate(pgml_dist):
    nll = gen_nll(pgml_dist, pgml_dist.sample(10_000, seed=14)).value
    entropy = float(-np.mean(np.log(pgml_dist.pdf(pgml_dist.sample(100_000, seed=15)))))
    assert nll == pytest.approx(entropy, abs=0.05)


def test_fourth_moment_settles(pgml_dist):
    moments = [np.mean(pgml_dist.sample(n, seed=16) ** 4) for n in (10_000, 100_000, 1_000_000)]
    assert np.all(np.isfinite(moments))
    assert max(moments) <= 2.0 * min(moments)


def test_large_sample_passes_ks(pgml_dist):
    n = 100_000
    draws = pgml_dist.sample(n, seed=17)
    assert ks_measure(draws, pgml_dist).m_ks < 1.63 / np.sqrt(n)


def test_matched_gaussian(pgml_dist):
    normal = pgml_dist.matched_gaussian()
    assert normal.mu == -1.0
    assert normal.sigma == pytest.approx(0.75)


def test_qq_points(pgml_dist, gaussian):
    x, y = pgml_dist.qq_points([0.25, 0.5])
    np.testing.assert_allclose(x, gaussian.quantile([0.25, 0.5]))
    assert y[1] == pytest.approx(-1.0)


def test_reversed_s_shape(pgml_dist, gaussian):
    # second differences of the Q-Q curve: concave below the centre, convex above
    x = np.linspace(-2.5, 2.5, 51)
    y = eval_f(pgml_dist.spec, x)
    second = np.diff(y, 2)
    centres = x[1:-1]
    assert np.all(second[centres < -0.8] < 0.0)
    assert np.all(second[centres > 0.8] > 0.0)


def test_equality_and_hash(gaussian, pgml_spec):
    a = GeneratedDistribution(gaussian, pgml_spec)
    b = GeneratedDistribution(gaussian, TransformSpec.pgml(-1.0, 0.5, 1.5, 1.8, 4.0))
    assert a == b and hash(a) == hash(b)
    assert a != GeneratedDistribution(gaussian, TransformSpec(-1.0, 0.5, PgmlUp(1.5), Zero()))
