"""
Heavy-Tail Framework

Heavy-tailed distributions generated by a monotone transform of a simple base
distribution: quantiles in closed form, seeded sampling, fitting by quantile
regression, maximum-likelihood baselines, a goodness-of-fit battery and tail
diagnostics.

Simple Usage:
    import heavy_tail_framework as htf

    # Fit the four-parameter transform over a Gaussian base
    result = htf.fit(returns, seed=0)

    # Draw from it
    draws = htf.sample(result.spec, n=10_000, seed=1)

    # Compare against Normal, Laplace and Student-t fits
    reports = htf.compare(returns, seed=0)

    # Run a built-in tail verification
    report = htf.tailcheck("prop4_t3", seed=0)
"""

__version__ = "1.0.0"
__author__ = "AI Building Blocks"

from typing import Any, List, Optional, Sequence, Union

from .core.analyzer import SeriesAnalyzer
from .core.base_dist import BaseDistribution
from .core.fitting import FitConfig, FitResult, fit_quantile_regression
from .core.generated import GeneratedDistribution
from .core.gof import GofConfig, GofReport
from .core.tail import TailConfig, TailReport, run_scenario
from .core.transform import TransformSpec

BaseLike = Union[str, BaseDistribution, None]


def _base(base: BaseLike) -> BaseDistribution:
    if base is None:
        return BaseDistribution.gaussian()
    if isinstance(base, BaseDistribution):
        return base
    return BaseDistribution.parse(base)


def fit(data: Any, base: BaseLike = None, seed: int = 0, **config: Any) -> FitResult:
    """
    Fit the transform to data by quantile regression.

    Args:
        data: Observations (log-returns)
        base: Base distribution or its label ("gaussian", "exponential", "t:DOF")
        seed: Seed for the restart perturbations
        **config: Further FitConfig fields

    Returns:
        FitResult with the fitted TransformSpec
    """
    return fit_quantile_regression(_base(base), data, FitConfig(seed=seed, **config))


def sample(spec: TransformSpec, n: int, seed: int, base: BaseLike = None) -> Any:
    """Draw n samples of f(X) with a fixed seed."""
    return GeneratedDistribution(_base(base), spec).sample(n, seed)


def compare(
    data: Any,
    models: Optional[Sequence[str]] = None,
    seed: int = 0,
    base: BaseLike = None,
    gof_config: Optional[GofConfig] = None,
) -> List[GofReport]:
    """
    Fit the requested models and rank them with the goodness-of-fit battery.

    Args:
        data: Observations (at least 100)
        models: Subset of normal, laplace, t, pgml (all by default)
        seed: Seed for the quantile-regression restarts
        base: Base distribution of the transform
        gof_config: Chi-square settings

    Returns:
        GofReport list ordered by NLL rank
    """
    analyzer = SeriesAnalyzer(
        models, FitConfig(seed=seed), gof_config, base=_base(base), fit_always=False
    )
    _, reports = analyzer.analyze(data)
    return reports


def tailcheck(
    scenario: str, seed: int, n_samples: Optional[int] = None, config: Optional[TailConfig] = None
) -> TailReport:
    """Run a built-in tail verification scenario."""
    return run_scenario(scenario, seed, n_samples, config)


__all__ = [
    "BaseDistribution",
    "FitConfig",
    "FitResult",
    "GeneratedDistribution",
    "GofConfig",
    "GofReport",
    "SeriesAnalyzer",
    "TailConfig",
    "TailReport",
    "TransformSpec",
    "compare",
    "fit",
    "sample",
    "tailcheck",
]
