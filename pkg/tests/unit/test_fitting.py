#!/usr/bin/env python3
"""
Tests for quantile-regression fitting
"""

import numpy as np
import pytest

from heavy_tail_framework.core import fitting
from heavy_tail_framework.core.fitting import (
    FitConfig,
    QuantileGrid,
    fit_quantile_regression,
    objective_gradient,
    pinball_loss,
    pinball_objective,
)
from heavy_tail_framework.core.transform import TransformSpec, eval_f
from heavy_tail_framework.exceptions import (
    DomainError,
    InitializationError,
    InsufficientDataError,
    OverflowGuardError,
)

SMALL_GRID = QuantileGrid.uniform(9)


def brute_force_objective(spec, base, data, grid):
    q = eval_f(spec, base.quantile(grid.as_array()))
    return sum(np.mean(pinball_loss(data, qa, a)) for qa, a in zip(q, grid.levels))


class TestPinballLoss:
    def test_values(self):
        assert pinball_loss(1.0, 0.0, 0.3) == pytest.approx(0.3)
        assert pinball_loss(-1.0, 0.0, 0.3) == pytest.approx(0.7)
        assert pinball_loss(2.0, 2.0, 0.9) == 0.0

    def test_nonnegative(self, rng):
        y = rng.standard_normal(100)
        assert np.all(pinball_loss(y, 0.1, 0.25) >= 0.0)

    def test_rejects_bad_level(self):
        with pytest.raises(DomainError):
            pinball_loss(1.0, 0.0, 1.0)


class TestQuantileGrid:
    def test_uniform_grid(self):
        grid = QuantileGrid.uniform()
        assert len(grid) == 99
        assert grid.levels[0] == pytest.approx(0.01)
        assert grid.levels[-1] == pytest.approx(0.99)

    @pytest.mark.parametrize("levels", [(), (0.5, 0.5), (0.2, 0.1), (0.0, 0.5)])
    def test_invalid_grids(self, levels):
        with pytest.raises(DomainError):
            QuantileGrid(levels)


class TestObjective:
    def test_matches_brute_force(self, gaussian, pgml_spec, pgml_sample):
        data = pgml_sample[:300]
        fast = pinball_objective(pgml_spec, gaussian, data, SMALL_GRID)
        slow = brute_force_objective(pgml_spec, gaussian, data, SMALL_GRID)
        assert fast == pytest.approx(slow, rel=1e-10)

    def test_matches_brute_force_with_ties(self, gaussian, linear_spec):
        # observations placed exactly on a model quantile
        q = eval_f(linear_spec, gaussian.quantile(SMALL_GRID.as_array()))
        data = np.concatenate([q, q[:3], [0.0, 5.0]])
        fast = pinball_objective(linear_spec, gaussian, data, SMALL_GRID)
        slow = brute_force_objective(linear_spec, gaussian, data, SMALL_GRID)
        assert fast == pytest.approx(slow, rel=1e-12)

    def test_gradient_matches_finite_differences(self, gaussian, pgml_spec, pgml_sample):
        data = pgml_sample[:200]
        gradient = objective_gradient(pgml_spec, gaussian, data, SMALL_GRID, unconstrained=False)
        h = 1e-8
        for name, value in pgml_spec.parameters().items():
            plus = pinball_objective(
                pgml_spec.with_parameters({name: value + h}), gaussian, data, SMALL_GRID
            )
            minus = pinball_objective(
                pgml_spec.with_parameters({name: value - h}), gaussian, data, SMALL_GRID
            )
            assert gradient[name] == pytest.approx((plus - minus) / (2 * h), abs=1e-4)

    def test_unconstrained_gradient_applies_chain_rule(self, gaussian, pgml_spec, pgml_sample):
        data = pgml_sample[:200]
        plain = objective_gradient(pgml_spec, gaussian, data, SMALL_GRID, unconstrained=False)
        chained = objective_gradient(pgml_spec, gaussian, data, SMALL_GRID)
        assert chained["mu"] == pytest.approx(plain["mu"])
        assert chained["sigma"] == pytest.approx(plain["sigma"] * 0.5)
        assert chained["g1.u"] == pytest.approx(plain["g1.u"] * 0.5)
        assert chained["g2.v"] == pytest.approx(plain["g2.v"] * 0.8)


class TestFit:
    def test_too_few_observations(self, gaussian, pgml_sample):
        with pytest.raises(InsufficientDataError) as info:
            fit_quantile_regression(gaussian, pgml_sample[:39])
        assert info.value.details["required"] == 40

    def test_constant_data(self, gaussian):
        with pytest.raises(InitializationError):
            fit_quantile_regression(gaussian, np.full(200, 3.0))

    def test_non_finite_data(self, gaussian, pgml_sample):
        data = pgml_sample[:100].copy()
        data[5] = np.nan
        with pytest.raises(DomainError):
            fit_quantile_regression(gaussian, data)

    def test_recovers_generating_transform(self, gaussian, pgml_spec, pgml_sample):
        config = FitConfig(seed=1, restarts=2)
        result = fit_quantile_regression(gaussian, pgml_sample, config)
        truth = pinball_objective(pgml_spec, gaussian, pgml_sample, config.grid)

        assert result.objective <= truth * (1.0 + 1e-3)
        assert result.spec.mu == pytest.approx(-1.0, abs=0.1)
        assert result.spec.sigma == pytest.approx(0.5, abs=0.15)
        assert result["restarts_run"] == 2

    def test_failed_restart_is_not_counted(self, monkeypatch, gaussian, pgml_sample):
        real_descend = fitting._descend
        calls = []

        def descend(*args):
            calls.append(args)
            if len(calls) == 2:
                raise OverflowGuardError("exponent out of range", x=800.0)
            return real_descend(*args)

        monkeypatch.setattr(fitting, "_descend", descend)
        config = FitConfig(seed=2, restarts=3, max_iters=100)
        result = fit_quantile_regression(gaussian, pgml_sample[:500], config)
        assert len(calls) == 3
        assert result["restarts_run"] == 2

    def test_objective_trace_is_nonincreasing(self, gaussian, pgml_sample):
        result = fit_quantile_regression(gaussian, pgml_sample[:1000], FitConfig(restarts=1))
        values = [v for _, v in result.trace]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    def test_same_seed_same_fit(self, gaussian, pgml_sample):
        config = FitConfig(seed=4, restarts=2, max_iters=300)
        first = fit_quantile_regression(gaussian, pgml_sample[:800], config)
        second = fit_quantile_regression(gaussian, pgml_sample[:800], config)
        assert first.spec == second.spec
        assert first.objective == second.objective

    def test_linear_template(self, gaussian, rng):
        data = 2.0 + 3.0 * rng.standard_normal(2000)
        template = TransformSpec(mu=0.0, sigma=1.0)
        result = fit_quantile_regression(gaussian, data, FitConfig(restarts=1), template)
        assert list(result.spec.parameters()) == ["mu", "sigma"]
        assert result.spec.slope_at_zero() == pytest.approx(3.0, rel=0.1)
        assert result.spec.mu == pytest.approx(2.0, abs=0.3)

    def test_result_serializes(self, gaussian, pgml_sample):
        result = fit_quantile_regression(gaussian, pgml_sample[:500], FitConfig(max_iters=50))
        data = result.to_dict(include_trace=True)
        assert TransformSpec.from_dict(data["spec"]) == result.spec
        assert data["trace"][0][0] == 0
