#!/usr/bin/env python3
"""
Tests for the baseline models
"""

import numpy as np
import pytest
from scipy import stats

from heavy_tail_framework.core.base_dist import BaseDistribution
from heavy_tail_framework.core.baselines import (
    GAUSSIAN_LIMIT_DOF,
    LaplaceModel,
    NormalModel,
    StudentTModel,
    baseline_nll,
    distribution_from_dict,
    mle_fit,
    normalize_kind,
)
from heavy_tail_framework.exceptions import (
    DegenerateDataError,
    DomainError,
    InsufficientDataError,
)

DATA = np.array([-2.0, -1.0, -0.5, 0.0, 0.1, 0.3, 0.7, 1.5, 2.0, 4.0])


def test_normal_closed_form():
    model = mle_fit("normal", DATA)
    assert model.mu == pytest.approx(DATA.mean())
    assert model.sigma == pytest.approx(DATA.std(ddof=0))


def test_laplace_closed_form():
    model = mle_fit("laplace", DATA)
    median = np.median(DATA)
    assert model.mu == pytest.approx(median)
    assert model.b == pytest.approx(np.mean(np.abs(DATA - median)))


def test_normal_nll_formula():
    model = mle_fit("normal", DATA)
    expected = 0.5 * np.log(2 * np.pi * model.sigma ** 2) + 0.5
    assert baseline_nll(model, DATA) == pytest.approx(expected)


def test_t_recovers_heavy_tail(t3_sample):
    model = mle_fit("t", t3_sample)
    assert isinstance(model, StudentTModel)
    assert 2.0 < model.dof < 5.0
    assert model.scale == pytest.approx(1.0, abs=0.15)


def test_t_is_never_worse_than_normal(rng):
    data = rng.standard_normal(500)
    t_model = mle_fit("t", data)
    normal = mle_fit("normal", data)
    assert t_model.nll(data) <= normal.nll(data) + 1e-12


def test_t_nll_matches_scipy(t3_sample):
    model = mle_fit("t", t3_sample)
    dof, loc, scale = model.dof, model.mu, model.scale
    expected = -np.mean(stats.t.logpdf(t3_sample, dof, loc=loc, scale=scale))
    assert model.nll(t3_sample) == pytest.approx(expected)


def test_gaussian_limit_uses_normal_density():
    model = StudentTModel(mu=1.0, scale=2.0, dof=GAUSSIAN_LIMIT_DOF)
    assert model.gaussian_limit
    assert model.pdf(1.5) == pytest.approx(stats.norm(1.0, 2.0).pdf(1.5))


@pytest.mark.parametrize("kind", ["normal", "laplace", "t"])
def test_constant_data_is_degenerate(kind):
    with pytest.raises(DegenerateDataError):
        mle_fit(kind, np.full(50, 0.25))


def test_too_few_points():
    with pytest.raises(InsufficientDataError):
        mle_fit("normal", DATA[:9])


def test_non_finite_data():
    data = DATA.copy()
    data[0] = np.inf
    with pytest.raises(DomainError):
        mle_fit("laplace", data)


@pytest.mark.parametrize(
    "alias,key", [("Gaussian", "normal"), ("student_t", "t"), ("l", "laplace")]
)
def test_kind_aliases(alias, key):
    assert normalize_kind(alias) == key


def test_unknown_kind():
    with pytest.raises(DomainError):
        mle_fit("cauchy", DATA)


def test_invalid_parameters():
    with pytest.raises(DomainError):
        NormalModel(0.0, 0.0)
    with pytest.raises(DomainError):
        LaplaceModel(0.0, -1.0)
    with pytest.raises(DomainError):
        StudentTModel(0.0, 1.0, 0.0)


def test_quantile_and_cdf():
    model = LaplaceModel(mu=0.5, b=2.0)
    assert model.quantile(0.5) == pytest.approx(0.5)
    assert model.cdf(0.5) == pytest.approx(0.5)
    assert model.sf(4.5) == pytest.approx(0.5 * np.exp(-2.0))


@pytest.mark.parametrize(
    "dist",
    [
        NormalModel(0.1, 2.0),
        LaplaceModel(-0.3, 0.7),
        StudentTModel(0.0, 1.5, 4.0),
        BaseDistribution.student_t(3.0),
    ],
)
def test_distribution_dict_round_trip(dist):
    assert distribution_from_dict(dist.to_dict()) == dist


def test_distribution_dict_needs_key():
    with pytest.raises(DomainError):
        distribution_from_dict({"mu": 0.0})
