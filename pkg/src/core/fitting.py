#!/usr/bin/env python3
"""
Quantile-Regression Fitting

Estimates transform parameters by minimizing the pinball loss summed over a
grid of probability levels:

    sum over alpha of (1/N) sum_i L_alpha(y_i, f(F^-1(alpha)))

The quantiles q_alpha = f(F^-1(alpha)) only depend on the parameters, so each
level costs one binary search in the sorted data plus two prefix sums.
Optimization runs in unconstrained coordinates (p = lower + exp(theta)) with
an Adam-style first-order method whose steps are rejected and shrunk whenever
they fail to decrease the objective.
"""

import logging
import math
from collections import OrderedDict
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..base import ArrayLike
from ..exceptions import (
    DomainError,
    HeavyTailError,
    InitializationError,
    InsufficientDataError,
)
from .base_dist import BaseDistribution, check_probability
from .transform import TransformSpec, eval_f, param_gradient, validate_transform

logger = logging.getLogger(__name__)

# Observations required per free parameter
MIN_POINTS_PER_PARAM = 10

# Smallest distance to a lower bound representable in log coordinates
MIN_OFFSET = 1e-12


@dataclass(frozen=True)
class QuantileGrid:
    """Strictly increasing probability levels in (0, 1)"""

    levels: Tuple[float, ...]

    def __post_init__(self):
        levels = tuple(float(a) for a in self.levels)
        if not levels:
            raise DomainError("Quantile grid needs at least one level")
        check_probability(np.asarray(levels), "level")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise DomainError("Quantile grid levels must be strictly increasing")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def uniform(cls, size: int = 99) -> "QuantileGrid":
        """Levels i / (size + 1), i = 1..size; size 99 gives 0.01, 0.02, ..., 0.99"""
        if size < 1:
            raise DomainError(f"Grid size must be >= 1, got {size}", size=size)
        return cls(tuple(i / (size + 1) for i in range(1, size + 1)))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.levels, dtype=float)

    def __len__(self) -> int:
        return len(self.levels)


@dataclass
class FitConfig:
    """Configuration for fit_quantile_regression"""

    grid: QuantileGrid = field(default_factory=QuantileGrid.uniform)
    max_iters: int = 5000
    step_size: float = 0.01
    tolerance: float = 1e-7
    patience: int = 20
    seed: int = 0
    restarts: int = 3
    restart_spread: float = 0.5
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    A: float = 4.0
    initial_shape: float = 1.05

    def __post_init__(self):
        if self.max_iters < 1:
            raise DomainError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.tolerance > 0.0:
            raise DomainError(f"tolerance must be > 0, got {self.tolerance}")
        if not self.step_size > 0.0:
            raise DomainError(f"step_size must be > 0, got {self.step_size}")
        if self.restarts < 1:
            raise DomainError(f"restarts must be >= 1, got {self.restarts}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["grid"] = {"size": len(self.grid), "levels": list(self.grid.levels)}
        return data


@dataclass
class FitResult:
    """Outcome of fit_quantile_regression"""

    spec: TransformSpec
    objective: float
    iterations: int
    converged: bool
    trace: List[Tuple[int, float]] = field(default_factory=list)
    restarts_run: int = 1

    def __getitem__(self, key):
        """Allow dict-style access"""
        return getattr(self, key)

    def to_dict(self, include_trace: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "spec": self.spec.to_dict(),
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
            "restarts_run": self.restarts_run,
        }
        if include_trace:
            data["trace"] = [[i, v] for i, v in self.trace]
        return data


@dataclass(frozen=True)
class Reparameterization:
    """Map between constrained parameters and unconstrained coordinates"""

    names: Tuple[str, ...]
    lower: Tuple[Optional[float], ...]

    @classmethod
    def for_spec(cls, spec: TransformSpec) -> "Reparameterization":
        names = tuple(spec.parameters())
        lower: List[Optional[float]] = []
        for name in names:
            if name == "mu":
                lower.append(None)
            elif name == "sigma":
                lower.append(0.0)
            else:
                role, _, param = name.partition(".")
                lower.append(getattr(spec, role).lower_bounds.get(param))
        return cls(names, tuple(lower))

    def to_unconstrained(self, spec: TransformSpec) -> np.ndarray:
        params = spec.parameters()
        theta = []
        for name, bound in zip(self.names, self.lower):
            value = params[name]
            theta.append(value if bound is None else math.log(max(value - bound, MIN_OFFSET)))
        return np.asarray(theta, dtype=float)

    def to_constrained(self, theta: np.ndarray) -> Dict[str, float]:
        values: Dict[str, float] = OrderedDict()
        for name, bound, t in zip(self.names, self.lower, theta):
            values[name] = float(t) if bound is None else bound + math.exp(float(t))
        return values

    def jacobian(self, theta: np.ndarray) -> np.ndarray:
        """dp/dtheta per coordinate"""
        return np.asarray(
            [1.0 if bound is None else math.exp(float(t)) for bound, t in zip(self.lower, theta)]
        )

    def to_spec(self, template: TransformSpec, theta: np.ndarray) -> TransformSpec:
        return template.with_parameters(self.to_constrained(theta))


class PinballProblem:
    """
    Sorted data plus prefix sums, so that the objective and its subgradient
    cost O(|grid| log N) per evaluation
    """

    def __init__(self, base: BaseDistribution, data: ArrayLike, grid: QuantileGrid):
        values = np.sort(np.asarray(data, dtype=float).ravel())
        if values.size == 0:
            raise DomainError("Pinball objective needs at least one observation")
        if not np.all(np.isfinite(values)):
            raise DomainError("Data contains non-finite values")
        self.base = base
        self.grid = grid
        self.data = values
        self.n = values.size
        self.prefix = np.concatenate([[0.0], np.cumsum(values)])
        self.alphas = grid.as_array()
        self.base_quantiles = np.asarray(base.quantile(self.alphas), dtype=float)

    def quantiles(self, spec: TransformSpec) -> np.ndarray:
        return np.asarray(eval_f(spec, self.base_quantiles), dtype=float)

    def _below(self, q: np.ndarray) -> np.ndarray:
        # ties y = q count as not below
        return np.searchsorted(self.data, q, side="left")

    def objective(self, spec: TransformSpec) -> float:
        q = self.quantiles(spec)
        count = self._below(q)
        below_sum = self.prefix[count]
        total = self.prefix[-1]
        per_level = self.alphas * (total - self.n * q) - (below_sum - count * q)
        return float(np.sum(per_level) / self.n)

    def gradient(self, spec: TransformSpec) -> "OrderedDict[str, float]":
        """Subgradient in the constrained parameters"""
        q = self.quantiles(spec)
        dq = -self.alphas + self._below(q) / self.n
        partials = param_gradient(spec, self.base_quantiles)
        return OrderedDict((name, float(np.dot(dq, partials[name]))) for name in partials)


def pinball_loss(y: ArrayLike, q: ArrayLike, alpha: ArrayLike) -> Any:
    """
    L_alpha(y, q) = (alpha - 1{y < q}) (y - q)

    Args:
        y: Observation(s)
        q: Quantile candidate(s)
        alpha: Probability level(s) in (0, 1)

    Returns:
        Nonnegative loss, broadcast over the inputs
    """
    a = check_probability(alpha)
    y_arr = np.asarray(y, dtype=float)
    q_arr = np.asarray(q, dtype=float)
    loss = (a - (y_arr < q_arr)) * (y_arr - q_arr)
    if np.ndim(y) == 0 and np.ndim(q) == 0 and np.ndim(alpha) == 0:
        return float(loss)
    return loss


def pinball_objective(
    spec: TransformSpec, base: BaseDistribution, data: ArrayLike, grid: QuantileGrid
) -> float:
    """Sum over the grid of the mean pinball loss at q = f(F^-1(alpha))"""
    return PinballProblem(base, data, grid).objective(spec)


def objective_gradient(
    spec: TransformSpec,
    base: BaseDistribution,
    data: ArrayLike,
    grid: QuantileGrid,
    unconstrained: bool = True,
) -> "OrderedDict[str, float]":
    """
    Subgradient of pinball_objective

    Uses d/dq L_alpha = -(alpha - 1{y < q}) with ties counted as not below,
    chained through param_gradient.

    Args:
        spec: Transform at which to differentiate (built-in families only)
        base: Base distribution
        data: Observations
        grid: Probability levels
        unconstrained: Differentiate with respect to the optimizer's coordinates
            (mu as is, every bounded parameter p through p = lower + exp(theta))
            instead of the parameters themselves

    Returns:
        Ordered mapping keyed like TransformSpec.parameters()
    """
    gradient = PinballProblem(base, data, grid).gradient(spec)
    if unconstrained:
        reparam = Reparameterization.for_spec(spec)
        jac = reparam.jacobian(reparam.to_unconstrained(spec))
        for name, scale in zip(reparam.names, jac):
            gradient[name] *= float(scale)
    return gradient


def _initial_spec(
    base: BaseDistribution, values: np.ndarray, template: TransformSpec
) -> TransformSpec:
    """Median/IQR start; the template supplies the families and their shapes"""
    q25, median, q75 = np.quantile(values, [0.25, 0.5, 0.75])
    factor = template.slope_at_zero() / template.sigma
    sigma0 = float(q75 - q25) / (base.iqr() * factor)
    if not (np.isfinite(sigma0) and sigma0 > 0.0):
        raise InitializationError(
            "Interquartile range of the data is zero; cannot initialize sigma",
            parameter="sigma",
        )
    mu0 = float(median) - sigma0 * factor * float(base.quantile(0.5))
    return template.with_parameters({"mu": mu0, "sigma": sigma0})


def _evaluate(problem: PinballProblem, reparam, template, theta) -> Tuple[float, np.ndarray]:
    spec = reparam.to_spec(template, theta)
    objective = problem.objective(spec)
    gradient = np.asarray(list(problem.gradient(spec).values()), dtype=float)
    return objective, gradient * reparam.jacobian(theta)


def _descend(
    problem: PinballProblem,
    reparam: Reparameterization,
    template: TransformSpec,
    theta: np.ndarray,
    config: FitConfig,
    scale: float,
) -> Tuple[np.ndarray, float, int, bool, List[Tuple[int, float]]]:
    """One Adam run with reject-and-shrink step control"""
    objective, gradient = _evaluate(problem, reparam, template, theta)
    trace = [(0, objective * scale)]
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    lr = config.step_size
    stalled = 0
    accepted = 0
    converged = False
    iteration = 0

    for iteration in range(1, config.max_iters + 1):
        m = config.beta1 * m + (1.0 - config.beta1) * gradient
        v = config.beta2 * v + (1.0 - config.beta2) * gradient * gradient
        t = accepted + 1
        m_hat = m / (1.0 - config.beta1 ** t)
        v_hat = v / (1.0 - config.beta2 ** t)
        candidate = theta - lr * m_hat / (np.sqrt(v_hat) + config.epsilon)

        try:
            cand_objective, cand_gradient = _evaluate(problem, reparam, template, candidate)
        except (HeavyTailError, OverflowError, ValueError):
            cand_objective, cand_gradient = float("inf"), gradient

        if np.isfinite(cand_objective) and cand_objective <= objective:
            decrease = (objective - cand_objective) / max(abs(objective), 1e-300)
            theta, objective, gradient = candidate, cand_objective, cand_gradient
            accepted += 1
            lr = min(lr * 1.1, config.step_size)
            trace.append((iteration, objective * scale))
        else:
            decrease = 0.0
            lr *= 0.5

        stalled = stalled + 1 if decrease < config.tolerance else 0
        if iteration % 100 == 0:
            logger.debug(
                f"iter {iteration}: objective={objective * scale:.8g}, lr={lr:.3g}, "
                f"stalled={stalled}"
            )
        if stalled >= config.patience:
            converged = True
            break

    return theta, objective, iteration, converged, trace


def fit_quantile_regression(
    base: BaseDistribution,
    data: ArrayLike,
    config: Optional[FitConfig] = None,
    template: Optional[TransformSpec] = None,
) -> FitResult:
    """
    Fit a transform to data by minimizing the summed pinball loss

    The data are standardized by their median and interquartile range before
    optimization; since mu and sigma enter f affinely the fitted spec maps
    back exactly and the objective scales by the same factor.

    Args:
        base: Base distribution F
        data: Observations (at least 10 per free parameter)
        config: Optimizer settings; defaults to FitConfig()
        template: Families and starting shapes; defaults to PGML with
            u = v = config.initial_shape and A = config.A

    Returns:
        FitResult of the best restart
    """
    config = config or FitConfig()
    if template is None:
        template = TransformSpec.pgml(u=config.initial_shape, v=config.initial_shape, A=config.A)

    values = np.asarray(data, dtype=float).ravel()
    if not np.all(np.isfinite(values)):
        raise DomainError("Data contains non-finite values")
    n_free = len(template.parameters())
    if values.size < MIN_POINTS_PER_PARAM * n_free:
        raise InsufficientDataError(
            f"Fitting {n_free} parameters needs at least {MIN_POINTS_PER_PARAM * n_free} "
            f"observations, got {values.size}",
            n=int(values.size),
            required=MIN_POINTS_PER_PARAM * n_free,
        )
    check = validate_transform(template)
    if not check.passed:
        raise DomainError(f"Starting transform is invalid: {check.reason}", witness=check.witness)

    q25, center, q75 = np.quantile(values, [0.25, 0.5, 0.75])
    scale = float(q75 - q25) or float(values.std())
    if not scale > 0.0:
        raise InitializationError("Data has no spread; cannot initialize sigma", parameter="sigma")
    standardized = (values - center) / scale

    problem = PinballProblem(base, standardized, config.grid)
    start = _initial_spec(base, standardized, template)
    reparam = Reparameterization.for_spec(start)
    theta0 = reparam.to_unconstrained(start)
    for name, value in zip(reparam.names, theta0):
        if not np.isfinite(value):
            raise InitializationError(f"Initial value of {name} is not finite", parameter=name)
    try:
        start_objective = problem.objective(start)
    except (HeavyTailError, OverflowError) as e:
        raise InitializationError(f"Objective fails at the starting point: {e}", parameter="mu")
    if not np.isfinite(start_objective):
        raise InitializationError("Objective is not finite at the starting point", parameter="mu")

    rng = np.random.Generator(np.random.Philox(config.seed))
    best = None
    total_iterations = 0
    restarts_run = 0
    for restart in range(config.restarts):
        theta = theta0.copy()
        if restart:
            theta = theta + config.restart_spread * rng.standard_normal(theta.size)
        try:
            outcome = _descend(problem, reparam, start, theta, config, scale)
        except (HeavyTailError, OverflowError, ValueError) as e:
            logger.warning(f"Restart {restart} failed at its starting point: {e}")
            continue
        total_iterations += outcome[2]
        restarts_run += 1
        logger.debug(f"Restart {restart}: objective={outcome[1] * scale:.8g}")
        if best is None or outcome[1] < best[1]:
            best = outcome
    if best is None:
        raise InitializationError("Every restart failed to start", parameter="mu")

    theta, _, iterations, converged, trace = best
    fitted = reparam.to_spec(start, theta)
    spec = fitted.with_parameters(
        {"mu": center + scale * fitted.mu, "sigma": scale * fitted.sigma}
    )
    objective = pinball_objective(spec, base, values, config.grid)

    if converged:
        logger.info(
            f"Fit converged: objective={objective:.8g} after {iterations} iterations "
            f"({restarts_run} restarts, {total_iterations} total)"
        )
    else:
        logger.warning(
            f"Fit did not converge in {config.max_iters} iterations; objective={objective:.8g}"
        )

    return FitResult(
        spec=spec,
        objective=objective,
        iterations=iterations,
        converged=converged,
        trace=trace,
        restarts_run=restarts_run,
    )
