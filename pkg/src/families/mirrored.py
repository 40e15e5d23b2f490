"""
Left-side mirror of a right-side family: g(x) = inner(-x)

Gives ExpM1OverX, IndicatorPower and GaussianTailPower a left-tail version
without duplicating their formulas.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..base import GFamily
from ..exceptions import DomainError


@dataclass(frozen=True)
class Mirrored(GFamily):
    """Reflection of a right-side family onto the left side"""

    inner: GFamily

    name = "mirrored"
    side = "left"

    def __post_init__(self):
        if self.inner.side != "right":
            raise DomainError(
                f"Only right-side families can be mirrored, got '{self.inner.name}'",
                family=self.inner.name,
            )

    @property
    def free_params(self) -> Tuple[str, ...]:  # type: ignore[override]
        return self.inner.free_params

    @property
    def lower_bounds(self) -> Dict[str, float]:  # type: ignore[override]
        return self.inner.lower_bounds

    def value(self, x: np.ndarray) -> np.ndarray:
        return self.inner.value(-np.asarray(x, dtype=float))

    def derivative(self, x: np.ndarray) -> np.ndarray:
        return -self.inner.derivative(-np.asarray(x, dtype=float))

    def check_range(self, x: np.ndarray) -> None:
        self.inner.check_range(-np.asarray(x, dtype=float))

    def param_gradient(self, x: np.ndarray) -> Dict[str, np.ndarray]:
        return self.inner.param_gradient(-np.asarray(x, dtype=float))

    def monotonicity_floor(self) -> Optional[Tuple[float, float]]:
        # g(x) + x g'(x) here equals inner's expression evaluated at -x
        floor = self.inner.monotonicity_floor()
        if floor is None:
            return None
        return floor[0], -floor[1]

    @property
    def unbounded(self) -> bool:
        return self.inner.unbounded

    def params(self) -> Dict[str, Any]:
        return self.inner.params()

    def replace(self, **changes: Any) -> "Mirrored":
        return Mirrored(self.inner.replace(**changes))

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.name, "inner": self.inner.to_dict()}
