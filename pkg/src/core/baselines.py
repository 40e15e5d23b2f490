#!/usr/bin/env python3
"""
Baseline Models

Maximum-likelihood Normal, Laplace and location-scale Student's t fits used
as comparators in goodness-of-fit runs. Normal and Laplace have closed-form
estimates; Student's t is fitted numerically with scipy.optimize (L-BFGS-B on
location, log scale and log dof).
"""

import logging
import math
from abc import abstractmethod
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List

import numpy as np
from scipy import optimize, stats

from ..base import ArrayLike, ContinuousDistribution, as_output
from ..exceptions import DegenerateDataError, DomainError, InsufficientDataError
from .base_dist import BaseDistribution, check_probability

logger = logging.getLogger(__name__)

MIN_MLE_POINTS = 10

# Degrees-of-freedom box and starting points for the Student's t MLE
T_DOF_BOUNDS = (0.5, 200.0)
T_DOF_STARTS = (2.0, 8.0, 50.0)

# From this dof on the t density is evaluated as its Gaussian limit
GAUSSIAN_LIMIT_DOF = 1e7


class BaselineModel(ContinuousDistribution):
    """Common scipy-backed implementation for the baseline families"""

    @property
    @abstractmethod
    def frozen(self) -> Any:
        """scipy.stats frozen distribution"""

    def cdf(self, x: ArrayLike) -> Any:
        return as_output(x, self.frozen.cdf(np.asarray(x, dtype=float)))

    def sf(self, x: ArrayLike) -> Any:
        return as_output(x, self.frozen.sf(np.asarray(x, dtype=float)))

    def pdf(self, x: ArrayLike) -> Any:
        return as_output(x, self.frozen.pdf(np.asarray(x, dtype=float)))

    def logpdf(self, x: ArrayLike) -> Any:
        return as_output(x, self.frozen.logpdf(np.asarray(x, dtype=float)))

    def quantile(self, alpha: ArrayLike) -> Any:
        return as_output(alpha, self.frozen.ppf(check_probability(alpha)))

    def isf(self, p: ArrayLike) -> Any:
        return as_output(p, self.frozen.isf(np.asarray(p, dtype=float)))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"model": self.name}
        data.update({k: float(v) for k, v in asdict(self).items()})  # type: ignore[call-overload]
        return data


@dataclass(frozen=True)
class NormalModel(BaselineModel):
    mu: float = 0.0
    sigma: float = 1.0

    name = "normal"
    n_params = 2

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}", parameter="sigma")

    @property
    def frozen(self) -> Any:
        return stats.norm(loc=self.mu, scale=self.sigma)


@dataclass(frozen=True)
class LaplaceModel(BaselineModel):
    mu: float = 0.0
    b: float = 1.0

    name = "laplace"
    n_params = 2

    def __post_init__(self):
        if not self.b > 0.0:
            raise DomainError(f"b must be > 0, got {self.b}", parameter="b")

    @property
    def frozen(self) -> Any:
        return stats.laplace(loc=self.mu, scale=self.b)


@dataclass(frozen=True)
class StudentTModel(BaselineModel):
    """Location-scale Student's t; dof >= GAUSSIAN_LIMIT_DOF means the Gaussian limit"""

    mu: float = 0.0
    scale: float = 1.0
    dof: float = 5.0

    name = "t"
    n_params = 3

    def __post_init__(self):
        if not self.scale > 0.0:
            raise DomainError(f"scale must be > 0, got {self.scale}", parameter="scale")
        if not self.dof > 0.0:
            raise DomainError(f"dof must be > 0, got {self.dof}", parameter="dof")

    @property
    def gaussian_limit(self) -> bool:
        return self.dof >= GAUSSIAN_LIMIT_DOF

    @property
    def frozen(self) -> Any:
        if self.gaussian_limit:
            return stats.norm(loc=self.mu, scale=self.scale)
        return stats.t(self.dof, loc=self.mu, scale=self.scale)


BASELINE_MODELS = {
    NormalModel.name: NormalModel,
    LaplaceModel.name: LaplaceModel,
    StudentTModel.name: StudentTModel,
}

_ALIASES = {"gaussian": "normal", "n": "normal", "l": "laplace", "student_t": "t", "student": "t"}


def _prepare(data: ArrayLike) -> np.ndarray:
    values = np.asarray(data, dtype=float).ravel()
    if values.size < MIN_MLE_POINTS:
        raise InsufficientDataError(
            f"MLE needs at least {MIN_MLE_POINTS} observations, got {values.size}",
            n=int(values.size),
        )
    if not np.all(np.isfinite(values)):
        raise DomainError("MLE data contains non-finite values")
    if np.ptp(values) == 0.0:
        raise DegenerateDataError("Data has zero variance", value=float(values[0]))
    return values


def _fit_normal(values: np.ndarray) -> NormalModel:
    return NormalModel(mu=float(values.mean()), sigma=float(values.std()))


def _fit_laplace(values: np.ndarray) -> LaplaceModel:
    median = float(np.median(values))
    b = float(np.mean(np.abs(values - median)))
    if b == 0.0:
        raise DegenerateDataError("Data has zero absolute deviation from its median")
    return LaplaceModel(mu=median, b=b)


def _t_objective(theta: np.ndarray, values: np.ndarray) -> float:
    mu, log_scale, log_dof = theta
    with np.errstate(all="ignore"):
        log_density = stats.t.logpdf(values, math.exp(log_dof), loc=mu, scale=math.exp(log_scale))
    value = -float(np.mean(log_density))
    return value if np.isfinite(value) else 1e300


def _fit_student_t(values: np.ndarray) -> StudentTModel:
    median = float(np.median(values))
    q25, q75 = np.quantile(values, [0.25, 0.75])
    iqr = float(q75 - q25)
    if iqr <= 0.0:
        iqr = float(values.std()) * 1.349

    bounds = [
        (None, None),
        (None, None),
        (math.log(T_DOF_BOUNDS[0]), math.log(T_DOF_BOUNDS[1])),
    ]
    candidates: List[StudentTModel] = []
    for dof in T_DOF_STARTS:
        scale0 = iqr / float(stats.t.ppf(0.75, dof) - stats.t.ppf(0.25, dof))
        start = np.array([median, math.log(scale0), math.log(dof)])
        result = optimize.minimize(
            _t_objective, start, args=(values,), method="L-BFGS-B", bounds=bounds
        )
        mu, log_scale, log_dof = result.x
        model = StudentTModel(mu=float(mu), scale=math.exp(log_scale), dof=math.exp(log_dof))
        logger.debug(
            f"t MLE from dof={dof}: dof={model.dof:.4g}, scale={model.scale:.4g}, "
            f"nll={result.fun:.6g}, success={result.success}"
        )
        candidates.append(model)

    # The Gaussian limit keeps the t fit at least as good as the Normal fit
    normal = _fit_normal(values)
    candidates.append(StudentTModel(mu=normal.mu, scale=normal.sigma, dof=GAUSSIAN_LIMIT_DOF))

    return min(candidates, key=lambda m: m.nll(values))


_FITTERS: Dict[str, Callable[[np.ndarray], BaselineModel]] = {
    "normal": _fit_normal,
    "laplace": _fit_laplace,
    "t": _fit_student_t,
}


def normalize_kind(kind: str) -> str:
    key = kind.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in _FITTERS:
        raise DomainError(
            f"Unknown baseline '{kind}'", kind=kind, valid=sorted(_FITTERS)
        )
    return key


def mle_fit(kind: str, data: ArrayLike) -> BaselineModel:
    """
    Maximum-likelihood fit of a baseline model

    Args:
        kind: "normal", "laplace" or "t"
        data: At least 10 finite observations with nonzero spread

    Returns:
        Fitted BaselineModel
    """
    key = normalize_kind(kind)
    values = _prepare(data)
    model = _FITTERS[key](values)
    logger.debug(f"Fitted {key}: {model.to_dict()}")
    return model


def baseline_nll(model: ContinuousDistribution, data: ArrayLike) -> float:
    """Mean negative log density of data under model"""
    return model.nll(data)


def distribution_from_dict(data: Dict[str, Any]) -> ContinuousDistribution:
    """Rebuild a base distribution ({"kind": ...}) or baseline model ({"model": ...})"""
    if "kind" in data:
        return BaseDistribution.from_dict(data)
    if "model" in data:
        key = normalize_kind(str(data["model"]))
        params = {k: float(v) for k, v in data.items() if k != "model"}
        return BASELINE_MODELS[key](**params)
    raise DomainError("Distribution JSON needs a 'kind' or 'model' key")
