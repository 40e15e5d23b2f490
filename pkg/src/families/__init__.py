"""
Tail-Control Family Registry

Centralized registry for the built-in g-families. This module provides a
single import point for every family and the name lookup used when transform
specs are read back from JSON.
"""

from typing import Any, Dict, List, Type

from ..base import GFamily
from ..exceptions import CapabilityError, DomainError
from .expm1 import ExpM1OverX
from .matched import MatchedTail
from .mirrored import Mirrored
from .pgml import PgmlDown, PgmlUp
from .power import GaussianTailPower, IndicatorPower
from .zero import Zero

# Registry of all available families, keyed by serialization name
ALL_FAMILIES: Dict[str, Type[GFamily]] = {
    PgmlUp.name: PgmlUp,
    PgmlDown.name: PgmlDown,
    ExpM1OverX.name: ExpM1OverX,
    IndicatorPower.name: IndicatorPower,
    GaussianTailPower.name: GaussianTailPower,
    Zero.name: Zero,
    Mirrored.name: Mirrored,
    MatchedTail.name: MatchedTail,
}

# Family categories for documentation and the CLI
FAMILY_CATEGORIES: Dict[str, List[str]] = {
    "right_tail": ["pgml_up", "expm1_over_x", "indicator_power", "gaussian_tail_power"],
    "left_tail": ["pgml_down", "mirrored"],
    "constructed": ["matched_tail"],
    "neutral": ["zero"],
}

# Families whose parameter gradient is available in closed form
GRADIENT_FAMILIES = ["pgml_up", "pgml_down", "expm1_over_x", "indicator_power", "zero"]


def family_from_dict(data: Dict[str, Any]) -> GFamily:
    """
    Rebuild a family from its JSON object

    Args:
        data: {"family": name, "params": {...}} as written by GFamily.to_dict

    Returns:
        The family instance
    """
    name = data.get("family")
    if name not in ALL_FAMILIES:
        raise DomainError(
            f"Unknown family '{name}'", family=name, valid=sorted(ALL_FAMILIES)
        )

    if name == Mirrored.name:
        return Mirrored(family_from_dict(data["inner"]))

    params = dict(data.get("params", {}))
    if name == MatchedTail.name:
        from ..core.baselines import distribution_from_dict

        if "base" not in data or "target" not in data:
            raise CapabilityError("Matched tail JSON needs 'base' and 'target'", family=name)
        return MatchedTail(
            base=distribution_from_dict(data["base"]),
            target=distribution_from_dict(data["target"]),
            mu=float(params["mu"]),
            sigma=float(params["sigma"]),
            splice=float(params["splice"]),
        )

    try:
        return ALL_FAMILIES[name](**{k: float(v) for k, v in params.items()})
    except TypeError as e:
        raise DomainError(f"Bad parameters for family '{name}': {e}", family=name)


__all__ = [
    "ALL_FAMILIES",
    "FAMILY_CATEGORIES",
    "GRADIENT_FAMILIES",
    "family_from_dict",
    "PgmlUp",
    "PgmlDown",
    "ExpM1OverX",
    "IndicatorPower",
    "GaussianTailPower",
    "Zero",
    "Mirrored",
    "MatchedTail",
]
