#!/usr/bin/env python3
"""
Tail-matching family

Built by core.tail.match_tail_transform. For x at or beyond the splice point s

    g(x) = (h(x) - mu) / (sigma x) - 1,    h(x) = F2^-1(F1(x))

so that mu + sigma x (g(x) + 1) = h(x) and the generated right tail is exactly
the target's. Below s the value g(s) is blended to zero over [s - 1, s] with a
cubic smoothstep, which keeps g continuous and nondecreasing.
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from ..base import ContinuousDistribution, GFamily
from ..exceptions import CapabilityError, OverflowGuardError


@dataclass(frozen=True)
class MatchedTail(GFamily):
    """Right-side control that reproduces a target distribution's right tail"""

    base: ContinuousDistribution
    target: ContinuousDistribution
    mu: float
    sigma: float
    splice: float

    name = "matched_tail"
    side = "right"
    free_params = ()
    lower_bounds = {}

    def tail_map(self, x: np.ndarray) -> np.ndarray:
        """h(x) = F2^-1(F1(x)), through survival functions for tail accuracy"""
        x = np.asarray(x, dtype=float)
        return np.asarray(self.target.isf(self.base.sf(x)), dtype=float)

    def tail_map_derivative(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        h = self.tail_map(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.asarray(self.base.pdf(x), dtype=float) / np.asarray(
                self.target.pdf(h), dtype=float
            )

    def _exact(self, x: np.ndarray) -> np.ndarray:
        return (self.tail_map(x) - self.mu) / (self.sigma * x) - 1.0

    @property
    def splice_value(self) -> float:
        """g at the splice point"""
        return float(self._exact(np.asarray([self.splice]))[0])

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = self.splice
        beyond = x >= s
        xs = np.where(beyond, x, s)
        exact = self._exact(xs)
        t = np.clip(x - (s - 1.0), 0.0, 1.0)
        blend = self.splice_value * t * t * (3.0 - 2.0 * t)
        return np.where(beyond, exact, blend)

    def derivative(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = self.splice
        beyond = x >= s
        xs = np.where(beyond, x, s)
        h = self.tail_map(xs)
        h_prime = self.tail_map_derivative(xs)
        exact = (h_prime * xs - (h - self.mu)) / (self.sigma * xs * xs)
        t = np.clip(x - (s - 1.0), 0.0, 1.0)
        blend = self.splice_value * 6.0 * t * (1.0 - t)
        return np.where(beyond, exact, blend)

    def check_range(self, x: np.ndarray) -> None:
        x = np.asarray(x, dtype=float)
        survival = np.asarray(self.base.sf(x), dtype=float)
        bad = (x >= self.splice) & (survival <= 0.0)
        if np.any(bad):
            x_bad = float(np.atleast_1d(x)[np.atleast_1d(bad)][0])
            raise OverflowGuardError(
                f"{self.name}: base survival underflows at x={x_bad:.6g}",
                x=x_bad,
                family=self.name,
            )

    @property
    def unbounded(self) -> bool:
        return True

    def params(self) -> Dict[str, Any]:
        return {"mu": self.mu, "sigma": self.sigma, "splice": self.splice}

    def to_dict(self) -> Dict[str, Any]:
        for role, dist in (("base", self.base), ("target", self.target)):
            if not hasattr(dist, "to_dict"):
                raise CapabilityError(
                    f"Cannot serialize matched tail: {role} '{dist.name}' has no JSON form",
                    family=self.name,
                )
        return {
            "family": self.name,
            "params": {k: float(v) for k, v in self.params().items()},
            "base": self.base.to_dict(),  # type: ignore[attr-defined]
            "target": self.target.to_dict(),  # type: ignore[attr-defined]
        }
