#!/usr/bin/env python3
"""
Power-type tail families

IndicatorPower switches on a polynomial right tail at 0, which over a
Student's t base of tail index nu yields a tail index nu / (1 + u).

GaussianTailPower grows like x^(nu-1) e^(nu x^2 / 2); over a Gaussian base this
is the growth rate that turns the rapidly decaying tail into a power law of
index 1 / nu. It is zero (with zero slope) up to the point x0 where its
generator h starts increasing, so it stays nondecreasing everywhere.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..base import GFamily
from ..exceptions import DomainError
from .common import guard_exponent, safe_exp


def _positive_log(x: np.ndarray) -> np.ndarray:
    """log(x) for x > 0, -inf elsewhere"""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0.0, np.log(np.where(x > 0.0, x, 1.0)), -np.inf)


@dataclass(frozen=True)
class IndicatorPower(GFamily):
    """Right-side control g(x) = 1{x >= 0} x^u / A"""

    u: float = 2.0
    A: float = 8.0

    name = "indicator_power"
    side = "right"
    free_params = ("u",)
    lower_bounds = {"u": 1.0}

    def __post_init__(self):
        if not self.u >= 1.0:
            raise DomainError(f"u must be >= 1, got {self.u}", parameter="u")
        if not self.A > 0.0:
            raise DomainError(f"A must be > 0, got {self.A}", parameter="A")

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0.0, safe_exp(self.u * _positive_log(x)), 0.0) / self.A

    def derivative(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.u == 1.0:
            return np.where(x >= 0.0, 1.0 / self.A, 0.0)
        power = safe_exp((self.u - 1.0) * _positive_log(x))
        return np.where(x >= 0.0, self.u * power, 0.0) / self.A

    def check_range(self, x: np.ndarray) -> None:
        x = np.asarray(x, dtype=float)
        exponent = np.where(x > 0.0, self.u * _positive_log(x), 0.0)
        guard_exponent(exponent, x, self.name)

    def param_gradient(self, x: np.ndarray) -> Dict[str, np.ndarray]:
        x = np.asarray(x, dtype=float)
        log_x = _positive_log(x)
        # d/du x^u = x^u ln x, zero on x <= 0
        grad = np.where(x > 0.0, safe_exp(self.u * log_x) * np.where(x > 0.0, log_x, 0.0), 0.0)
        return {"u": grad / self.A}

    def monotonicity_floor(self) -> Optional[Tuple[float, float]]:
        # g + x g' = (1 + u) x^u / A on x > 0 and 0 on x < 0
        return 0.0, -1.0

    @property
    def unbounded(self) -> bool:
        return True


@dataclass(frozen=True)
class GaussianTailPower(GFamily):
    """
    Right-side control g(x) = 1{x >= x0} (h(x) - h(x0))^2 / (A h(x))

    with h(x) = x^(nu-1) exp(nu x^2 / 2) and x0 = max(1, sqrt((1 - nu) / nu)).
    The exponent nu x^2 / 2 overflows quickly, so useful values of nu are
    small (<= 0.5) and grids moderate.
    """

    nu: float = 0.5
    A: float = 4.0

    name = "gaussian_tail_power"
    side = "right"
    free_params = ()
    lower_bounds = {}

    def __post_init__(self):
        if not self.nu > 0.0:
            raise DomainError(f"nu must be > 0, got {self.nu}", parameter="nu")
        if not self.A > 0.0:
            raise DomainError(f"A must be > 0, got {self.A}", parameter="A")

    @property
    def x0(self) -> float:
        return max(1.0, math.sqrt(max(0.0, (1.0 - self.nu) / self.nu)))

    def _log_h(self, x: np.ndarray) -> np.ndarray:
        return (self.nu - 1.0) * _positive_log(x) + 0.5 * self.nu * x * x

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        x0 = self.x0
        active = x > x0
        xa = np.where(active, x, x0)
        log_h0 = float(self._log_h(np.asarray(x0)))
        ratio = safe_exp(self._log_h(xa) - log_h0)
        with np.errstate(over="ignore", invalid="ignore"):
            g = math.exp(log_h0) * (ratio - 1.0) * (1.0 - 1.0 / ratio) / self.A
        return np.where(active, g, 0.0)

    def derivative(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        x0 = self.x0
        active = x > x0
        xa = np.where(active, x, x0)
        log_h0 = float(self._log_h(np.asarray(x0)))
        h = safe_exp(self._log_h(xa))
        ratio = safe_exp(self._log_h(xa) - log_h0)
        h_prime = h * ((self.nu - 1.0) / xa + self.nu * xa)
        with np.errstate(over="ignore", invalid="ignore"):
            d = h_prime * (1.0 - 1.0 / (ratio * ratio)) / self.A
        return np.where(active, d, 0.0)

    def check_range(self, x: np.ndarray) -> None:
        x = np.asarray(x, dtype=float)
        guard_exponent(np.where(x > self.x0, 0.5 * self.nu * x * x, 0.0), x, self.name)

    def monotonicity_floor(self) -> Optional[Tuple[float, float]]:
        # g and g' vanish below x0 and are nonnegative above it
        return 0.0, -1.0

    @property
    def unbounded(self) -> bool:
        return True
