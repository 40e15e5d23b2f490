"""
Exponential-over-x family: g(x) = (e^(ux) - 1) / x, with g(0) = u

Over a standard exponential base with mu = 0, sigma = 1 this gives
f(x) = e^(ux) - 1 + x; u = 0 leaves the base untouched.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..base import GFamily
from ..exceptions import DomainError
from .common import guard_exponent, safe_exp

# Below this |u x| the removable singularity is evaluated by its series
SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class ExpM1OverX(GFamily):
    """Right-side control g(x) = expm1(u x) / x"""

    u: float = 0.5

    name = "expm1_over_x"
    side = "right"
    free_params = ("u",)
    lower_bounds = {"u": 0.0}

    def __post_init__(self):
        if not self.u >= 0.0:
            raise DomainError(f"u must be >= 0, got {self.u}", parameter="u")

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self.u
        z = u * x
        small = np.abs(z) < SERIES_CUTOFF
        safe_x = np.where(small, 1.0, x)
        with np.errstate(over="ignore", invalid="ignore"):
            direct = np.expm1(z) / safe_x
        series = u + u * u * x / 2.0 + u ** 3 * x * x / 6.0
        return np.where(small, series, direct)

    def derivative(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self.u
        z = u * x
        small = np.abs(z) < SERIES_CUTOFF
        safe_x = np.where(small, 1.0, x)
        with np.errstate(over="ignore", invalid="ignore"):
            direct = (z * safe_exp(z) - np.expm1(z)) / (safe_x * safe_x)
        series = u * u / 2.0 + u ** 3 * x / 3.0 + u ** 4 * x * x / 8.0
        return np.where(small, series, direct)

    def check_range(self, x: np.ndarray) -> None:
        guard_exponent(self.u * np.asarray(x, dtype=float), x, self.name)

    def param_gradient(self, x: np.ndarray) -> Dict[str, np.ndarray]:
        # d/du expm1(u x) / x = e^(u x)
        return {"u": safe_exp(self.u * np.asarray(x, dtype=float))}

    def monotonicity_floor(self) -> Optional[Tuple[float, float]]:
        # g + x g' = u e^(u x) >= 0, approaching 0 as x -> -inf
        return 0.0, float("-inf")

    @property
    def unbounded(self) -> bool:
        return self.u > 0.0
