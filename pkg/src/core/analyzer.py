#!/usr/bin/env python3
"""
Series analyzer

Runs the whole per-series protocol: fit the transform by quantile regression,
fit the requested baselines by maximum likelihood, compare everything with the
goodness-of-fit battery and collect the result in a RunReport.

Key features:
- One place that turns a return series into a report
- Model list validated up front
- Loading of fitted transforms from spec or report JSON
"""

import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import HeavyTailError, InsufficientDataError, UsageError
from ..utils.file_utils import InputLimits, check_input_file
from ..utils.series import Frequency, load_returns
from .base_dist import BaseDistribution
from .baselines import mle_fit
from .fitting import FitConfig, FitResult, fit_quantile_regression
from .generated import GeneratedDistribution
from .gof import GofConfig, GofReport, ModelEntry, gof_report, rank_reports
from .reporting import RunReport
from .transform import TransformSpec

logger = logging.getLogger(__name__)

PGML_MODEL = "pgml"
MODEL_NAMES = ("normal", "laplace", "t", PGML_MODEL)
DEFAULT_MODELS = MODEL_NAMES


def parse_models(models: Union[str, Sequence[str], None]) -> List[str]:
    """
    Validate a model list ("normal,laplace,t,pgml" or a sequence)

    Returns:
        Model names in the order given, duplicates removed
    """
    if models is None:
        return list(DEFAULT_MODELS)
    items = models.split(",") if isinstance(models, str) else list(models)
    names: List[str] = []
    for item in items:
        name = item.strip().lower()
        if not name:
            continue
        if name not in MODEL_NAMES:
            raise UsageError(
                f"Unknown model '{item}'; valid models: {', '.join(MODEL_NAMES)}",
                model=item,
                valid=list(MODEL_NAMES),
            )
        if name not in names:
            names.append(name)
    if not names:
        raise UsageError("At least one model is required", valid=list(MODEL_NAMES))
    return names


def load_spec(path: Union[str, Path]) -> Tuple[TransformSpec, Optional[BaseDistribution]]:
    """
    Read a fitted transform

    Accepts either a bare transform JSON (as written by TransformSpec.to_json)
    or a run report, in which case the transform and base of its `pgml`
    section are used.

    Returns:
        (spec, base) where base is None when the file does not name one
    """
    file_path = check_input_file(str(path), InputLimits.SPEC_FILE)
    try:
        data = json.loads(file_path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise UsageError(f"Spec file {file_path} is not valid JSON: {e}", file_path=str(file_path))
    if not isinstance(data, dict):
        raise UsageError(f"Spec file {file_path} must hold a JSON object")

    base = None
    if "pgml" in data:
        section = data.get("pgml") or {}
        if "spec" not in section:
            raise UsageError(
                f"Report {file_path} has no fitted transform", file_path=str(file_path)
            )
        if section.get("base"):
            base = BaseDistribution.from_dict(section["base"])
        data = section["spec"]
    elif "spec" in data:
        if data.get("base"):
            base = BaseDistribution.from_dict(data["base"])
        data = data["spec"]
    return TransformSpec.from_dict(data), base


def require_observations(values: np.ndarray, series_id: str) -> np.ndarray:
    """Refuse series too short for the 99-level quantile grid"""
    if values.size < InputLimits.MIN_OBSERVATIONS:
        raise InsufficientDataError(
            f"Series '{series_id}' has {values.size} observations; at least "
            f"{InputLimits.MIN_OBSERVATIONS} are needed so that every level of the "
            "quantile grid is supported by data",
            series=series_id,
            n=int(values.size),
            required=InputLimits.MIN_OBSERVATIONS,
        )
    return values


class SeriesAnalyzer:
    """Fits and compares models on return series"""

    def __init__(
        self,
        models: Union[str, Sequence[str], None] = None,
        fit_config: Optional[FitConfig] = None,
        gof_config: Optional[GofConfig] = None,
        base: Optional[BaseDistribution] = None,
        spec: Optional[TransformSpec] = None,
        fit_always: bool = True,
    ):
        """
        Initialize the series analyzer

        Args:
            models: Models to compare; defaults to normal, laplace, t and pgml
            fit_config: Quantile-regression settings
            gof_config: Chi-square settings
            base: Base distribution of the transform (Gaussian by default)
            spec: Use this transform instead of fitting one
            fit_always: Fit the transform even when pgml is not among the models
        """
        self.models = parse_models(models)
        self.fit_config = fit_config or FitConfig()
        self.gof_config = gof_config or GofConfig()
        self.base = base or BaseDistribution.gaussian()
        self.spec = spec
        self.fit_always = fit_always

    def config(self) -> Dict[str, Any]:
        """Resolved configuration echoed into every report"""
        return {
            "models": list(self.models),
            "base": self.base.to_dict(),
            "fit": self.fit_config.to_dict() if self._fits else None,
            "gof": asdict(self.gof_config),
            "fixed_spec": self.spec is not None,
        }

    @property
    def _fits(self) -> bool:
        return self.spec is None and (self.fit_always or PGML_MODEL in self.models)

    def fit_pgml(self, values: np.ndarray) -> Tuple[TransformSpec, Optional[FitResult]]:
        if self.spec is not None:
            return self.spec, None
        result = fit_quantile_regression(self.base, values, self.fit_config)
        return result.spec, result

    def analyze(self, values: Any, series_id: str = "series") -> Tuple[RunReport, List[GofReport]]:
        """
        Analyze one return series

        Args:
            values: Log-returns
            series_id: Label stored in the report

        Returns:
            (report, gof reports)
        """
        data = require_observations(np.asarray(values, dtype=float).ravel(), series_id)

        pgml: Optional[Dict[str, Any]] = None
        spec: Optional[TransformSpec] = None
        pgml_error: Optional[Dict[str, Any]] = None
        if self.spec is not None or self._fits:
            pgml = {"base": self.base.to_dict()}
            try:
                spec, fit_result = self.fit_pgml(data)
            except HeavyTailError as e:
                logger.warning(f"Transform fit failed on '{series_id}': {e}")
                pgml_error = pgml["error"] = e.to_dict()
            else:
                pgml["spec"] = spec.to_dict()
                if fit_result is not None:
                    pgml.update(fit_result.to_dict())

        entries: List[ModelEntry] = []
        failed: List[GofReport] = []
        baselines: List[Dict[str, Any]] = []
        for name in self.models:
            if name == PGML_MODEL:
                if spec is not None:
                    entries.append(ModelEntry(name, GeneratedDistribution(self.base, spec)))
                else:
                    failed.append(GofReport(name, data.size, error=pgml_error))
                continue
            try:
                model = mle_fit(name, data)
            except HeavyTailError as e:
                logger.warning(f"Baseline '{name}' failed on '{series_id}': {e}")
                baselines.append({"model": name, "error": e.to_dict()})
                failed.append(GofReport(name, data.size, error=e.to_dict()))
                continue
            baselines.append(model.to_dict())
            entries.append(ModelEntry(name, model))

        reports = [gof_report(data, entry, self.gof_config) for entry in entries] + failed
        if len(reports) > 1:
            reports = rank_reports(reports)

        logger.info(
            f"Analyzed '{series_id}' ({data.size} observations): "
            + ", ".join(f"{r.model_name} nll={r.nll:.4g}" for r in reports)
        )
        report = RunReport.build(
            series_id,
            config=self.config(),
            pgml=pgml,
            baselines=baselines,
            gof=[r.to_dict() for r in reports],
        )
        return report, reports

    def analyze_file(
        self, file_path: Union[str, Path], frequency: Union[str, Frequency] = Frequency.DAILY
    ) -> Tuple[RunReport, List[GofReport]]:
        """Read a series file, compute returns at the given frequency and analyze them"""
        series = load_returns(file_path, frequency)
        report, reports = self.analyze(series.values, series.id)
        report.config["input"] = {"file": Path(file_path).name, "frequency": series.frequency.value}
        return report, reports
