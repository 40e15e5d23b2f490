#!/usr/bin/env python3
"""
Exponential-power tail families

g1(x) = u^x / A bends the right tail, g2(x) = v^(-x) / A bends the left tail.
With u = v = 1 both are the constant 1/A and the transform is a straight line
of slope sigma * (2/A + 1), i.e. a Gaussian base stays Gaussian.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..base import GFamily
from ..exceptions import DomainError
from .common import guard_exponent, safe_exp


def _check(base: float, A: float, label: str) -> None:
    if not base >= 1.0:
        raise DomainError(f"{label} must be >= 1, got {base}", parameter=label)
    if not A > 0.0:
        raise DomainError(f"A must be > 0, got {A}", parameter="A")


@dataclass(frozen=True)
class PgmlUp(GFamily):
    """Right-side control g1(x) = u^x / A"""

    u: float = 1.5
    A: float = 4.0

    name = "pgml_up"
    side = "right"
    free_params = ("u",)
    lower_bounds = {"u": 1.0}

    def __post_init__(self):
        _check(self.u, self.A, "u")

    def value(self, x: np.ndarray) -> np.ndarray:
        return safe_exp(np.asarray(x, dtype=float) * math.log(self.u)) / self.A

    def derivative(self, x: np.ndarray) -> np.ndarray:
        return math.log(self.u) * self.value(x)

    def check_range(self, x: np.ndarray) -> None:
        guard_exponent(np.asarray(x, dtype=float) * math.log(self.u), x, self.name)

    def param_gradient(self, x: np.ndarray) -> Dict[str, np.ndarray]:
        x = np.asarray(x, dtype=float)
        # d/du u^x = x u^(x-1)
        return {"u": x * safe_exp((x - 1.0) * math.log(self.u)) / self.A}

    def monotonicity_floor(self) -> Optional[Tuple[float, float]]:
        # u^x (1 + x ln u) / A is minimized at x = -2 / ln u
        if self.u == 1.0:
            return 1.0 / self.A, 0.0
        return -math.exp(-2.0) / self.A, -2.0 / math.log(self.u)

    @property
    def unbounded(self) -> bool:
        return self.u > 1.0


@dataclass(frozen=True)
class PgmlDown(GFamily):
    """Left-side control g2(x) = v^(-x) / A"""

    v: float = 1.8
    A: float = 4.0

    name = "pgml_down"
    side = "left"
    free_params = ("v",)
    lower_bounds = {"v": 1.0}

    def __post_init__(self):
        _check(self.v, self.A, "v")

    def value(self, x: np.ndarray) -> np.ndarray:
        return safe_exp(-np.asarray(x, dtype=float) * math.log(self.v)) / self.A

    def derivative(self, x: np.ndarray) -> np.ndarray:
        return -math.log(self.v) * self.value(x)

    def check_range(self, x: np.ndarray) -> None:
        guard_exponent(-np.asarray(x, dtype=float) * math.log(self.v), x, self.name)

    def param_gradient(self, x: np.ndarray) -> Dict[str, np.ndarray]:
        x = np.asarray(x, dtype=float)
        return {"v": -x * safe_exp((-x - 1.0) * math.log(self.v)) / self.A}

    def monotonicity_floor(self) -> Optional[Tuple[float, float]]:
        if self.v == 1.0:
            return 1.0 / self.A, 0.0
        return -math.exp(-2.0) / self.A, 2.0 / math.log(self.v)

    @property
    def unbounded(self) -> bool:
        return self.v > 1.0
