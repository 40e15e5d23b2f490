#!/usr/bin/env python3
"""
Goodness-of-Fit Battery

- chi_square: trimmed-and-binned Pearson statistic with b equal-width bins
  over the trimmed range plus two open tail bins; dof = b - p + 1
- ks_measure / kuiper_measure: D+, D-, max(D+, D-) and D+ + D- on sorted data
- gof_compare: one GofReport per model with per-metric ranks
- summarize_comparisons: aggregate over many series (rejection rate, mean and
  standard error of the distance measures, top-two NLL frequency)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import stats

from ..base import ArrayLike, ContinuousDistribution
from ..exceptions import (
    BinDegeneracyError,
    DomainError,
    HeavyTailError,
    InsufficientDataError,
)

logger = logging.getLogger(__name__)

MIN_CHI2_POINTS = 50
MIN_EXPECTED = 1e-12

CdfLike = Union[ContinuousDistribution, Callable[[np.ndarray], Any]]

# Metric -> True when larger values are better
RANKED_METRICS = {
    "chi2_pvalue": True,
    "m_ks": False,
    "m_kuiper": False,
    "nll": False,
}


@dataclass
class GofConfig:
    """Chi-square settings; trim is the fraction removed from each tail"""

    trim: float = 0.05
    bins: int = 10
    trim_per_tail: bool = True

    def __post_init__(self):
        if not 0.0 <= self.trim < 0.5:
            raise DomainError(f"trim must be in [0, 0.5), got {self.trim}", trim=self.trim)
        if self.bins < 2:
            raise DomainError(f"bins must be >= 2, got {self.bins}", bins=self.bins)


class ChiSquareResult(NamedTuple):
    statistic: float
    dof: int
    pvalue: float


class ChiSquareBins(NamedTuple):
    edges: np.ndarray
    observed: np.ndarray
    expected: np.ndarray


class KsResult(NamedTuple):
    d_plus: float
    d_minus: float
    m_ks: float


def _cdf_of(model: CdfLike) -> Callable[[np.ndarray], np.ndarray]:
    function = model.cdf if isinstance(model, ContinuousDistribution) else model
    return lambda x: np.asarray(function(np.asarray(x, dtype=float)), dtype=float)


def _sf_of(model: CdfLike) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(model, ContinuousDistribution):
        return lambda x: np.asarray(model.sf(np.asarray(x, dtype=float)), dtype=float)
    cdf = _cdf_of(model)
    return lambda x: 1.0 - cdf(x)


def chi_square_bins(
    data: ArrayLike, cdf: CdfLike, trim: float = 0.05, b: int = 10
) -> ChiSquareBins:
    """
    Observed and expected counts of the chi-square binning

    Bin 0 holds y < lower, bins 1..b split [lower, upper] into equal widths
    (right-closed on the last), bin b + 1 holds y > upper, where lower and upper
    are the trim and 1 - trim empirical quantiles (linear interpolation).

    Returns:
        ChiSquareBins with the b + 1 inner edges and b + 2 counts each
    """
    values = np.sort(np.asarray(data, dtype=float).ravel())
    n = values.size
    if n < MIN_CHI2_POINTS:
        raise InsufficientDataError(
            f"Chi-square needs at least {MIN_CHI2_POINTS} observations, got {n}", n=n
        )
    if b < 2:
        raise DomainError(f"Chi-square needs b >= 2 bins, got {b}", bins=b)

    lower, upper = np.quantile(values, [trim, 1.0 - trim])
    edges = np.linspace(lower, upper, b + 1)

    inner, _ = np.histogram(values[(values >= lower) & (values <= upper)], bins=edges)
    observed = np.concatenate(
        [[np.sum(values < lower)], inner, [np.sum(values > upper)]]
    ).astype(float)

    cdf_at = _cdf_of(cdf)(edges)
    expected = n * np.concatenate(
        [[cdf_at[0]], np.diff(cdf_at), [_sf_of(cdf)(np.asarray([upper]))[0]]]
    )
    return ChiSquareBins(edges=edges, observed=observed, expected=expected)


def chi_square(
    data: ArrayLike, cdf: CdfLike, p: int, trim: float = 0.05, b: int = 10
) -> ChiSquareResult:
    """
    Trimmed-and-binned chi-square test

    Args:
        data: Observations (at least 50)
        cdf: Fitted model or its cdf
        p: Number of estimated parameters
        trim: Fraction trimmed from each tail before binning
        b: Number of equal-width bins over the trimmed range

    Returns:
        ChiSquareResult(statistic, dof = b - p + 1, upper-tail p-value)

    Raises:
        BinDegeneracyError: some expected count is below 1e-12
    """
    bins = chi_square_bins(data, cdf, trim, b)
    degenerate = np.flatnonzero(~(bins.expected >= MIN_EXPECTED))
    if degenerate.size:
        index = int(degenerate[0])
        raise BinDegeneracyError(
            f"Chi-square bin {index} has expected count {bins.expected[index]:.3g}",
            bin_index=index,
            expected=float(bins.expected[index]),
        )
    statistic = float(np.sum((bins.observed - bins.expected) ** 2 / bins.expected))
    dof = b - p + 1
    pvalue = float(stats.chi2.sf(statistic, dof)) if dof >= 1 else float("nan")
    return ChiSquareResult(statistic=statistic, dof=dof, pvalue=pvalue)


def ks_measure(data: ArrayLike, cdf: CdfLike) -> KsResult:
    """
    D+ = max_i (i/n - F(y_(i))), D- = max_i (F(y_(i)) - (i-1)/n), m_KS = max(D+, D-)

    Args:
        data: Observations (nonempty)
        cdf: Model or its cdf

    Returns:
        KsResult(d_plus, d_minus, m_ks)
    """
    values = np.sort(np.asarray(data, dtype=float).ravel())
    n = values.size
    if n == 0:
        raise DomainError("KS measure needs at least one observation")
    F = _cdf_of(cdf)(values)
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - F))
    d_minus = float(np.max(F - (i - 1) / n))
    return KsResult(d_plus=d_plus, d_minus=d_minus, m_ks=max(d_plus, d_minus))


def kuiper_measure(data: ArrayLike, cdf: CdfLike) -> float:
    """m_K = D+ + D-"""
    result = ks_measure(data, cdf)
    return result.d_plus + result.d_minus


@dataclass
class ModelEntry:
    """A fitted model plus the number of parameters estimated for it"""

    name: str
    model: ContinuousDistribution
    n_params: Optional[int] = None

    @property
    def parameter_count(self) -> int:
        return self.n_params if self.n_params is not None else int(self.model.n_params)


@dataclass
class GofReport:
    """Goodness-of-fit metrics of one model on one series"""

    model_name: str
    n: int
    chi2: float = float("nan")
    chi2_dof: int = 0
    chi2_pvalue: float = float("nan")
    m_ks: float = float("nan")
    m_kuiper: float = float("nan")
    nll: float = float("nan")
    nll_excluded: int = 0
    n_params: int = 0
    ranks: Dict[str, Optional[int]] = field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None
    trim: float = 0.05
    trim_per_tail: bool = True

    def __getitem__(self, key):
        """Allow dict-style access"""
        return getattr(self, key)

    @property
    def failed(self) -> bool:
        return self.error is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model_name": self.model_name,
            "n": self.n,
            "chi2": self.chi2,
            "chi2_dof": self.chi2_dof,
            "chi2_pvalue": self.chi2_pvalue,
            "m_ks": self.m_ks,
            "m_kuiper": self.m_kuiper,
            "nll": self.nll,
            "nll_excluded": self.nll_excluded,
            "n_params": self.n_params,
            "ranks": dict(self.ranks),
            "error": self.error,
            "metadata": {"trim": self.trim, "trim_per_tail": self.trim_per_tail},
        }


def gof_report(
    data: ArrayLike, entry: ModelEntry, config: Optional[GofConfig] = None
) -> GofReport:
    """
    Run the whole battery for one model

    Failures are recorded in the report's error field instead of raised.
    """
    config = config or GofConfig()
    values = np.asarray(data, dtype=float).ravel()
    report = GofReport(
        model_name=entry.name,
        n=int(values.size),
        n_params=entry.parameter_count,
        trim=config.trim,
        trim_per_tail=config.trim_per_tail,
    )
    try:
        chi = chi_square(values, entry.model, entry.parameter_count, config.trim, config.bins)
        ks = ks_measure(values, entry.model)
        nll = entry.model.nll_details(values)
    except (HeavyTailError, ArithmeticError, ValueError) as e:
        error = e.to_dict() if isinstance(e, HeavyTailError) else {
            "error": type(e).__name__,
            "message": str(e),
            "details": {},
        }
        report.error = error
        logger.warning(f"Model '{entry.name}' failed the GOF battery: {e}")
        return report

    report.chi2, report.chi2_dof, report.chi2_pvalue = chi
    report.m_ks = ks.m_ks
    report.m_kuiper = ks.d_plus + ks.d_minus
    report.nll = nll.value
    report.nll_excluded = nll.n_excluded
    return report


def _assign_ranks(reports: List[GofReport]) -> None:
    """Competition ranks per metric; failed or NaN entries get None"""
    for metric, larger_better in RANKED_METRICS.items():
        scored = []
        for report in reports:
            value = report[metric]
            if report.failed or value is None or not np.isfinite(value):
                report.ranks[metric] = None
            else:
                scored.append((report, -value if larger_better else value))
        for report, key in scored:
            report.ranks[metric] = 1 + sum(1 for _, other in scored if other < key)


def rank_reports(reports: Sequence[GofReport]) -> List[GofReport]:
    """Assign per-metric ranks and order by NLL rank, then model name; failed reports last"""
    ranked = list(reports)
    _assign_ranks(ranked)

    def order(report: GofReport):
        rank = report.ranks.get("nll")
        return (rank is None, rank if rank is not None else 0, report.model_name)

    return sorted(ranked, key=order)


def gof_compare(
    data: ArrayLike, models: Sequence[ModelEntry], config: Optional[GofConfig] = None
) -> List[GofReport]:
    """
    Compare several fitted models on the same data

    Args:
        data: Observations
        models: At least two entries
        config: Chi-square settings

    Returns:
        Reports ordered by NLL rank, then model name; failed models last
    """
    if len(models) < 2:
        raise DomainError(f"Comparison needs at least 2 models, got {len(models)}")
    reports = rank_reports([gof_report(data, entry, config) for entry in models])
    failed = sum(1 for r in reports if r.failed)
    logger.info(
        f"Compared {len(reports)} models on {reports[0].n} observations"
        + (f" ({failed} failed)" if failed else "")
    )
    return reports


def reports_frame(reports: Sequence[GofReport]) -> pd.DataFrame:
    """One row per model: name, chi2, dof, pvalue, m_ks, m_k, nll and the ranks"""
    rows = []
    for report in reports:
        rows.append(
            {
                "name": report.model_name,
                "chi2": report.chi2,
                "dof": report.chi2_dof,
                "pvalue": report.chi2_pvalue,
                "m_ks": report.m_ks,
                "m_k": report.m_kuiper,
                "nll": report.nll,
                "rank_chi2": report.ranks.get("chi2_pvalue"),
                "rank_ks": report.ranks.get("m_ks"),
                "rank_kuiper": report.ranks.get("m_kuiper"),
                "rank_nll": report.ranks.get("nll"),
                "error": report.error["message"] if report.error else "",
            }
        )
    return pd.DataFrame(rows)


def summarize_comparisons(
    comparisons: Sequence[Sequence[GofReport]], level: float = 0.05
) -> pd.DataFrame:
    """
    Aggregate comparisons over many series

    Args:
        comparisons: One gof_compare result per series
        level: Significance level of the chi-square rejection rate

    Returns:
        DataFrame indexed by model with series count, chi-square rejection rate,
        mean and standard error of m_ks and m_kuiper, and the frequency of
        ranking among the top two by NLL
    """
    frame = pd.DataFrame(
        [
            {
                "model": r.model_name,
                "pvalue": r.chi2_pvalue,
                "m_ks": r.m_ks,
                "m_kuiper": r.m_kuiper,
                "top2_nll": (r.ranks.get("nll") or math.inf) <= 2,
                "failed": r.failed,
            }
            for reports in comparisons
            for r in reports
        ]
    )
    if frame.empty:
        return frame

    def standard_error(column: pd.Series) -> float:
        column = column.dropna()
        return float(column.std(ddof=1) / math.sqrt(len(column))) if len(column) > 1 else math.nan

    def rejection_rate(pvalues: pd.Series) -> float:
        return float((pvalues.dropna() < level).mean())

    grouped = frame.groupby("model", sort=True)
    summary = pd.DataFrame(
        {
            "series": grouped.size(),
            "failures": grouped["failed"].sum(),
            "chi2_rejection_rate": grouped["pvalue"].apply(rejection_rate),
            "mean_m_ks": grouped["m_ks"].mean(),
            "se_m_ks": grouped["m_ks"].apply(standard_error),
            "mean_m_kuiper": grouped["m_kuiper"].mean(),
            "se_m_kuiper": grouped["m_kuiper"].apply(standard_error),
            "top2_nll_frequency": grouped["top2_nll"].mean(),
        }
    )
    summary.index.name = "model"
    return summary
