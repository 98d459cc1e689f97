"""Binned median StA ratio against log sale price."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .fairness import RatioSample

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrendBin:
    bin_center_logprice: float
    median_ratio: Optional[float]
    count: int


def trend_bins(
    samples: Sequence[RatioSample],
    num_bins: int = 14,
    log_range: tuple[float, float] = (9.0, 16.0),
) -> list[TrendBin]:
    """Equal-width bins over ``log_range``; samples outside the range are dropped."""
    lo, hi = log_range
    if num_bins < 2:
        raise ValueError(f"num_bins must be at least 2, got {num_bins}")
    if not lo < hi:
        raise ValueError(f"log_range must satisfy lo < hi, got {log_range}")

    log_prices = np.log(np.fromiter((s.sale_price for s in samples), dtype=float, count=len(samples)))
    ratios = np.fromiter((s.ratio for s in samples), dtype=float, count=len(samples))
    inside = (log_prices >= lo) & (log_prices <= hi)
    if (~inside).any():
        logger.debug("Trend excludes %d samples outside log range %s", int((~inside).sum()), log_range)

    edges = np.linspace(lo, hi, num_bins + 1)
    # the top edge belongs to the last bin
    index = np.clip(np.searchsorted(edges, log_prices[inside], side="right") - 1, 0, num_bins - 1)
    kept = ratios[inside]

    bins = []
    for b in range(num_bins):
        members = kept[index == b]
        center = float((edges[b] + edges[b + 1]) / 2.0)
        median = float(np.median(members)) if members.size else None
        bins.append(TrendBin(bin_center_logprice=center, median_ratio=median, count=int(members.size)))
    return bins


def trend_spread(bins: Sequence[TrendBin], min_count: int = 1) -> float:
    """Largest minus smallest median over bins holding at least ``min_count`` samples."""
    medians = [b.median_ratio for b in bins if b.count >= min_count and b.median_ratio is not None]
    if len(medians) < 2:
        return 0.0
    return max(medians) - min(medians)

