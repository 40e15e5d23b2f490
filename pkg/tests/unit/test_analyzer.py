#!/usr/bin/env python3
"""
Tests for the series analyzer
"""

import json

import numpy as np
import pytest

from heavy_tail_framework.core.analyzer import (
    DEFAULT_MODELS,
    SeriesAnalyzer,
    load_spec,
    parse_models,
    require_observations,
)
from heavy_tail_framework.core.base_dist import BaseDistribution
from heavy_tail_framework.core.fitting import FitConfig
from heavy_tail_framework.core import analyzer as analyzer_module
from heavy_tail_framework.exceptions import (
    DegenerateDataError,
    InitializationError,
    InsufficientDataError,
    UsageError,
)


class TestParseModels:
    def test_default(self):
        assert parse_models(None) == ["normal", "laplace", "t", "pgml"]

    def test_order_kept_and_duplicates_dropped(self):
        assert parse_models("t, Normal,t") == ["t", "normal"]

    def test_sequence(self):
        assert parse_models(["pgml", "laplace"]) == ["pgml", "laplace"]

    def test_unknown_model(self):
        with pytest.raises(UsageError) as info:
            parse_models("normal,cauchy")
        assert info.value.exit_code == 2
        assert info.value.details["model"] == "cauchy"

    def test_empty(self):
        with pytest.raises(UsageError):
            parse_models(" , ")


class TestLoadSpec:
    def test_bare_spec(self, tmp_path, pgml_spec):
        path = tmp_path / "spec.json"
        path.write_text(pgml_spec.to_json(), encoding="utf-8")
        spec, base = load_spec(path)
        assert spec == pgml_spec
        assert base is None

    def test_spec_with_base(self, tmp_path, pgml_spec):
        path = tmp_path / "spec.json"
        data = {"spec": pgml_spec.to_dict(), "base": {"kind": "t", "dof": 5.0}}
        path.write_text(json.dumps(data), encoding="utf-8")
        spec, base = load_spec(path)
        assert spec == pgml_spec
        assert base == BaseDistribution.student_t(5.0)

    def test_report(self, tmp_path, pgml_sample, pgml_spec):
        analyzer = SeriesAnalyzer(spec=pgml_spec)
        report, _ = analyzer.analyze(pgml_sample[:500], "s")
        path = tmp_path / "report.json"
        report.write(path)
        spec, base = load_spec(path)
        assert spec == pgml_spec
        assert base == BaseDistribution.gaussian()

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(UsageError):
            load_spec(path)

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(UsageError):
            load_spec(path)


def test_require_observations():
    with pytest.raises(InsufficientDataError) as info:
        require_observations(np.zeros(99), "short")
    assert info.value.details["required"] == 100
    assert require_observations(np.zeros(100), "ok").size == 100


class TestSeriesAnalyzer:
    def test_fixed_spec_compares_all_models(self, pgml_spec, pgml_sample):
        analyzer = SeriesAnalyzer(spec=pgml_spec)
        report, reports = analyzer.analyze(pgml_sample[:2000], "synthetic")
        assert len(report.gof) == len(DEFAULT_MODELS) == 4
        assert {r.model_name for r in reports} == set(DEFAULT_MODELS)
        assert [b["model"] for b in report.baselines] == ["normal", "laplace", "t"]
        assert report.config["fixed_spec"] is True
        assert report.config["fit"] is None
        assert "objective" not in report.pgml

    def test_pgml_wins_on_its_own_data(self, pgml_spec, pgml_sample):
        _, reports = SeriesAnalyzer(spec=pgml_spec).analyze(pgml_sample, "synthetic")
        assert reports[0].model_name == "pgml"
        assert reports[0].ranks["nll"] == 1

    def test_fitted_report(self, pgml_sample):
        analyzer = SeriesAnalyzer(
            models="normal,pgml", fit_config=FitConfig(seed=3, restarts=1, max_iters=200)
        )
        report, reports = analyzer.analyze(pgml_sample[:1000], "fitted")
        assert report.pgml["iterations"] >= 1
        assert report.config["fit"]["seed"] == 3
        assert report.config["fit"]["grid"]["size"] == 99
        assert len(reports) == 2

    def test_single_model(self, pgml_spec, pgml_sample):
        _, reports = SeriesAnalyzer(models="pgml", spec=pgml_spec).analyze(pgml_sample[:300])
        assert len(reports) == 1
        assert reports[0].ranks == {}

    def test_short_series_is_refused(self, pgml_spec):
        with pytest.raises(InsufficientDataError):
            SeriesAnalyzer(spec=pgml_spec).analyze(np.linspace(-1.0, 1.0, 99))

    def test_analyze_file_records_input(self, returns_csv):
        analyzer = SeriesAnalyzer(
            models="normal,laplace", fit_config=FitConfig(seed=0, restarts=1, max_iters=100)
        )
        report, _ = analyzer.analyze_file(returns_csv)
        assert report.series == "returns"
        assert report.config["input"] == {"file": "returns.csv", "frequency": "daily"}

    def test_failed_baseline_is_recorded(self, monkeypatch, pgml_spec, pgml_sample):
        real_fit = analyzer_module.mle_fit

        def flaky_fit(kind, data):
            if kind == "laplace":
                raise DegenerateDataError("no spread", model=kind)
            return real_fit(kind, data)

        monkeypatch.setattr(analyzer_module, "mle_fit", flaky_fit)
        report, reports = SeriesAnalyzer(spec=pgml_spec).analyze(pgml_sample[:2000], "s")

        assert [r.model_name for r in reports][-1] == "laplace"
        laplace = reports[-1]
        assert laplace.failed
        assert laplace.error["error"] == "DegenerateDataError"
        assert all(rank is None for rank in laplace.ranks.values())
        ranked = [r for r in reports if not r.failed]
        assert sorted(r.ranks["nll"] for r in ranked) == [1, 2, 3]
        assert {"model": "laplace", "error": laplace.error} in report.baselines
        assert report.gof[-1]["error"]["error"] == "DegenerateDataError"

    def test_failed_transform_fit_is_recorded(self, monkeypatch, pgml_sample):
        def failing_fit(base, values, config):
            raise InitializationError("objective not finite", parameter="sigma")

        monkeypatch.setattr(analyzer_module, "fit_quantile_regression", failing_fit)
        report, reports = SeriesAnalyzer(models="normal,pgml").analyze(pgml_sample[:500], "s")

        assert [r.model_name for r in reports] == ["normal", "pgml"]
        assert reports[1].error["error"] == "InitializationError"
        assert reports[0].ranks["nll"] == 1
        assert report.pgml["error"]["details"]["parameter"] == "sigma"
        assert "spec" not in report.pgml
