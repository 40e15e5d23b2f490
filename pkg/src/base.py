#!/usr/bin/env python3
"""
Base Interfaces for the Heavy-Tail Framework

This module provides the foundational interfaces shared by every distribution
and every tail-control family in the framework:

- ContinuousDistribution: what the goodness-of-fit battery, the tail
  diagnostics and the CLI need from a model (cdf, pdf, quantile, survival)
- GFamily: the monotone tail-control functions g1 (right side) and g2
  (left side) that bend the straight line mu + sigma * x

Concrete families live in the families package and register themselves in
families.ALL_FAMILIES; concrete distributions live in core.
"""

import dataclasses
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .exceptions import CapabilityError, DomainError

logger = logging.getLogger(__name__)

ArrayLike = Any


def as_output(x: ArrayLike, result: np.ndarray) -> Any:
    """Return a Python float for scalar input, the array otherwise"""
    if np.ndim(x) == 0:
        return float(np.asarray(result).reshape(()))
    return result


@dataclass(frozen=True)
class NllResult:
    """Mean negative log density plus the points that had to be excluded"""

    value: float
    n_used: int
    n_excluded: int
    excluded_indices: Tuple[int, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "n_used": self.n_used,
            "n_excluded": self.n_excluded,
        }


class ContinuousDistribution(ABC):
    """
    Abstract base class for univariate continuous distributions

    Subclasses implement cdf, pdf and quantile. Survival functions default to
    complements and should be overridden wherever the underlying library offers
    a tail-accurate version.
    """

    name = "distribution"
    n_params = 0

    @abstractmethod
    def cdf(self, x: ArrayLike) -> Any:
        """Cumulative distribution function"""

    @abstractmethod
    def pdf(self, x: ArrayLike) -> Any:
        """Probability density function"""

    @abstractmethod
    def quantile(self, alpha: ArrayLike) -> Any:
        """Inverse of the cdf on (0, 1)"""

    def sf(self, x: ArrayLike) -> Any:
        """Survival function 1 - cdf"""
        return as_output(x, 1.0 - np.asarray(self.cdf(x), dtype=float))

    def isf(self, p: ArrayLike) -> Any:
        """Inverse survival function"""
        return self.quantile(1.0 - np.asarray(p, dtype=float))

    def logpdf(self, x: ArrayLike) -> Any:
        with np.errstate(divide="ignore"):
            return as_output(x, np.log(np.asarray(self.pdf(x), dtype=float)))

    def nll_details(self, data: ArrayLike) -> NllResult:
        """
        Mean negative log density over the data

        Points with non-finite log density are excluded and counted rather
        than aborting the evaluation.

        Args:
            data: Observations (nonempty)

        Returns:
            NllResult with value and excluded count
        """
        values = np.asarray(data, dtype=float).ravel()
        if values.size == 0:
            raise DomainError("NLL needs at least one observation")

        log_density = np.atleast_1d(np.asarray(self.logpdf(values), dtype=float))
        finite = np.isfinite(log_density)
        excluded = np.flatnonzero(~finite)
        if excluded.size:
            logger.warning(
                f"{self.name}: excluded {excluded.size} of {values.size} points "
                f"with non-finite density from NLL"
            )
        value = float(-log_density[finite].mean()) if finite.any() else float("inf")
        return NllResult(
            value=value,
            n_used=int(finite.sum()),
            n_excluded=int(excluded.size),
            excluded_indices=tuple(int(i) for i in excluded),
        )

    def nll(self, data: ArrayLike) -> float:
        return self.nll_details(data).value


class GFamily(ABC):
    """
    Abstract base class for tail-control functions g

    A family is a small immutable parameter record that knows how to evaluate
    g, its derivative in x and (for the built-in families) its partial
    derivatives in the family parameters.

    Class attributes:
        name: Registry key used for serialization
        side: "right" for g1 candidates, "left" for g2, "both" for Zero
        free_params: Parameters the fitter may move
        lower_bounds: Lower bound of each free parameter (for reparameterization)
    """

    name = "abstract"
    side = "both"
    free_params: Tuple[str, ...] = ()
    lower_bounds: Dict[str, float] = {}

    @abstractmethod
    def value(self, x: np.ndarray) -> np.ndarray:
        """g(x), evaluated without range checks"""

    @abstractmethod
    def derivative(self, x: np.ndarray) -> np.ndarray:
        """g'(x), evaluated without range checks"""

    def check_range(self, x: np.ndarray) -> None:
        """Raise OverflowGuardError if g(x) leaves the representable range"""

    def param_gradient(self, x: np.ndarray) -> Dict[str, np.ndarray]:
        """Partial derivatives of g with respect to each free parameter"""
        raise CapabilityError(
            f"Family '{self.name}' has no analytic parameter gradient", family=self.name
        )

    def monotonicity_floor(self) -> Optional[Tuple[float, float]]:
        """
        Closed-form infimum of g(x) + x g'(x) over x != 0

        Returns:
            (infimum, argmin) or None when no certificate is known and the
            condition has to be checked numerically
        """
        return None

    @property
    def unbounded(self) -> bool:
        """Whether g grows without bound on its own side"""
        return False

    def params(self) -> Dict[str, Any]:
        if dataclasses.is_dataclass(self):
            return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        return {}

    def replace(self, **changes: Any) -> "GFamily":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.name, "params": {k: float(v) for k, v in self.params().items()}}
