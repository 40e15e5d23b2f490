"""
The Zero family: no bending on that side
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..base import GFamily


@dataclass(frozen=True)
class Zero(GFamily):
    """g(x) = 0 for every x; valid on either side"""

    name = "zero"
    side = "both"
    free_params = ()
    lower_bounds = {}

    def value(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def derivative(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def param_gradient(self, x: np.ndarray) -> Dict[str, np.ndarray]:
        return {}

    def monotonicity_floor(self) -> Optional[Tuple[float, float]]:
        return 0.0, 0.0
