#!/usr/bin/env python3
"""
Base distributions F

The standard Gaussian, the standard exponential and Student's t with nu
degrees of freedom. Everything the transform machinery needs from F (quantile,
cdf, pdf and the tail-accurate survival pair sf / isf) is delegated to
scipy.stats frozen distributions.

Sampling is by inverse transform: 52-bit integers from a counter-based Philox
generator are turned into uniforms (k + 0.5) / 2^52, which lie strictly inside
(0, 1), and pushed through the quantile function. The same uniforms therefore
always give the same sample on every platform numpy supports.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Optional

import numpy as np
from scipy import stats

from ..base import ArrayLike, ContinuousDistribution, as_output
from ..exceptions import DomainError

logger = logging.getLogger(__name__)

UNIFORM_BITS = 52


class BaseKind(Enum):
    """Supported base distributions"""

    GAUSSIAN = "gaussian"
    EXPONENTIAL = "exponential"
    STUDENT_T = "t"


def check_probability(alpha: ArrayLike, label: str = "alpha") -> np.ndarray:
    """Return alpha as an array, raising DomainError unless every value is in (0, 1)"""
    values = np.asarray(alpha, dtype=float)
    bad = ~((values > 0.0) & (values < 1.0))
    if np.any(bad):
        first = float(np.atleast_1d(values)[np.atleast_1d(bad)][0])
        raise DomainError(f"{label} must lie in (0, 1), got {first}", **{label: first})
    return values


def uniforms(n: int, seed: int) -> np.ndarray:
    """
    Seeded uniforms strictly inside (0, 1)

    Args:
        n: Number of draws (>= 1)
        seed: Nonnegative integer seed

    Returns:
        Array of n uniforms on the grid (k + 0.5) / 2^52
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"Sample size must be a positive integer, got {n}", n=n)
    if int(seed) != seed or seed < 0:
        raise DomainError(f"Seed must be a nonnegative integer, got {seed}", seed=seed)
    rng = np.random.Generator(np.random.Philox(int(seed)))
    k = rng.integers(0, 2 ** UNIFORM_BITS, size=int(n), dtype=np.uint64)
    return (k.astype(np.float64) + 0.5) / float(2 ** UNIFORM_BITS)


@dataclass(frozen=True)
class BaseDistribution(ContinuousDistribution):
    """
    Tagged base distribution F

    Args:
        kind: Which distribution
        dof: Degrees of freedom, required (and > 0) for Student's t only
    """

    kind: BaseKind = BaseKind.GAUSSIAN
    dof: Optional[float] = None

    n_params = 0

    def __post_init__(self):
        if not isinstance(self.kind, BaseKind):
            object.__setattr__(self, "kind", BaseKind(self.kind))
        if self.kind is BaseKind.STUDENT_T:
            if self.dof is None or not float(self.dof) > 0.0:
                raise DomainError(
                    f"Student's t needs dof > 0, got {self.dof}", parameter="dof"
                )
            object.__setattr__(self, "dof", float(self.dof))
        elif self.dof is not None:
            raise DomainError(f"{self.kind.value} takes no dof", parameter="dof")

    @classmethod
    def gaussian(cls) -> "BaseDistribution":
        return cls(BaseKind.GAUSSIAN)

    @classmethod
    def exponential(cls) -> "BaseDistribution":
        return cls(BaseKind.EXPONENTIAL)

    @classmethod
    def student_t(cls, dof: float) -> "BaseDistribution":
        return cls(BaseKind.STUDENT_T, dof)

    @classmethod
    def parse(cls, text: str) -> "BaseDistribution":
        """
        Parse a CLI label: "gaussian", "exponential" or "t:DOF"

        Args:
            text: Label to parse

        Returns:
            BaseDistribution
        """
        label = text.strip().lower()
        if label in ("gaussian", "normal"):
            return cls.gaussian()
        if label in ("exponential", "exp"):
            return cls.exponential()
        if label.startswith("t:"):
            try:
                dof = float(label[2:])
            except ValueError:
                raise DomainError(f"Bad degrees of freedom in '{text}'", base=text)
            return cls.student_t(dof)
        raise DomainError(
            f"Unknown base '{text}' (expected gaussian, exponential or t:DOF)", base=text
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BaseDistribution":
        return cls(BaseKind(data["kind"]), data.get("dof"))

    @property
    def name(self) -> str:  # type: ignore[override]
        return self.label

    @property
    def label(self) -> str:
        if self.kind is BaseKind.STUDENT_T:
            return f"t:{self.dof:g}"
        return self.kind.value

    @cached_property
    def frozen(self) -> Any:
        """The scipy.stats frozen distribution behind this base"""
        if self.kind is BaseKind.GAUSSIAN:
            return stats.norm()
        if self.kind is BaseKind.EXPONENTIAL:
            return stats.expon()
        return stats.t(self.dof)

    @property
    def tail_index(self) -> Optional[float]:
        """Right-tail index (dof for Student's t); None for light tails"""
        return self.dof if self.kind is BaseKind.STUDENT_T else None

    @property
    def support_lower(self) -> float:
        return 0.0 if self.kind is BaseKind.EXPONENTIAL else float("-inf")

    def cdf(self, x: ArrayLike) -> Any:
        return as_output(x, self.frozen.cdf(np.asarray(x, dtype=float)))

    def sf(self, x: ArrayLike) -> Any:
        return as_output(x, self.frozen.sf(np.asarray(x, dtype=float)))

    def pdf(self, x: ArrayLike) -> Any:
        return as_output(x, self.frozen.pdf(np.asarray(x, dtype=float)))

    def logpdf(self, x: ArrayLike) -> Any:
        return as_output(x, self.frozen.logpdf(np.asarray(x, dtype=float)))

    def quantile(self, alpha: ArrayLike) -> Any:
        values = check_probability(alpha)
        return as_output(alpha, self.frozen.ppf(values))

    def isf(self, p: ArrayLike) -> Any:
        """Inverse survival; p = 0 maps to the upper support end (inf)"""
        return as_output(p, self.frozen.isf(np.asarray(p, dtype=float)))

    def iqr(self) -> float:
        return float(self.frozen.ppf(0.75) - self.frozen.ppf(0.25))

    def sample(self, n: int, seed: int) -> np.ndarray:
        """Inverse-transform sample of size n, deterministic in seed"""
        draws = self.frozen.ppf(uniforms(n, seed))
        logger.debug(f"Drew {n} samples from {self.label} with seed {seed}")
        return np.asarray(draws, dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.dof is not None:
            data["dof"] = self.dof
        return data


def base_quantile(dist: BaseDistribution, alpha: ArrayLike) -> Any:
    """F^-1(alpha); alpha outside (0, 1) raises DomainError"""
    return dist.quantile(alpha)


def base_cdf(dist: BaseDistribution, x: ArrayLike) -> Any:
    """F(x); values below the support give 0"""
    return dist.cdf(x)


def base_pdf(dist: BaseDistribution, x: ArrayLike) -> Any:
    return dist.pdf(x)


def base_sample(dist: BaseDistribution, n: int, seed: int) -> np.ndarray:
    """Seeded inverse-transform sample; n = 0 raises DomainError"""
    return dist.sample(n, seed)
