"""
Shared helpers for the tail-control families
"""

import numpy as np

from ..exceptions import OverflowGuardError

# Largest exponent allowed before exp() is treated as an overflow
EXP_LIMIT = 700.0


def guard_exponent(exponent: np.ndarray, x: np.ndarray, family: str) -> None:
    """
    Raise OverflowGuardError when any exponent exceeds EXP_LIMIT

    Args:
        exponent: Exponent values that will be passed to exp()
        x: The x values they were computed from (same shape)
        family: Family name for the diagnostic
    """
    exponent = np.asarray(exponent, dtype=float)
    bad = np.abs(exponent) > EXP_LIMIT
    if np.any(bad):
        x_bad = float(np.asarray(x, dtype=float)[bad].flat[0]) if np.ndim(x) else float(x)
        raise OverflowGuardError(
            f"{family}: exponent exceeds range at x={x_bad:.6g}",
            x=x_bad,
            family=family,
        )


def safe_exp(exponent: np.ndarray) -> np.ndarray:
    """exp() that saturates to inf/0 silently; used where ranges are not guarded"""
    with np.errstate(over="ignore", under="ignore"):
        return np.exp(exponent)
