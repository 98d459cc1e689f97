"""Sales-to-assessment ratios and the group, deviation-weighted and relative fairness scores.

All scores are nonpositive; zero is perfectly fair.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..dataset.records import PropertyRecord, build_quantile_index, sale_prices
from ..runtime.ksegment import KSegmentModel, assess_many

logger = logging.getLogger(__name__)


class PartitionError(ValueError):
    """Raised when samples cannot be split into the requested number of groups."""


class DegenerateScoreError(ZeroDivisionError):
    """Raised when relative unfairness is taken against a perfectly fair baseline."""


@dataclass(frozen=True)
class RatioSample:
    sale_price: float
    sale_quantile: float
    assessed_value: float
    ratio: float


@dataclass(frozen=True)
class GroupPartition:
    n: int
    boundaries: tuple[float, ...]
    group_of: tuple[int, ...]
    group_sizes: tuple[int, ...]


class FairnessConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(default=2, ge=2)
    alpha: float = Field(default=2.0, ge=0.0)


def ratio_samples(prices, assessed) -> list[RatioSample]:
    """Pair sale prices with assessed values; ``sale_quantile`` is taken over these prices."""
    x = np.asarray(prices, dtype=float)
    v = np.asarray(assessed, dtype=float)
    if x.shape != v.shape or x.ndim != 1:
        raise ValueError(f"Prices and assessments must be equal-length vectors, got {x.shape} and {v.shape}")
    if x.size == 0:
        return []
    quantiles = build_quantile_index(x).quantiles(x)
    return [
        RatioSample(sale_price=float(p), sale_quantile=float(q), assessed_value=float(a), ratio=float(a / p))
        for p, q, a in zip(x, quantiles, v)
    ]


def sta_ratios(records: Sequence[PropertyRecord], model: KSegmentModel) -> list[RatioSample]:
    return ratio_samples(sale_prices(records), assess_many(model, records))


def _arrays(samples: Sequence[RatioSample]) -> tuple[np.ndarray, np.ndarray]:
    quantiles = np.fromiter((s.sale_quantile for s in samples), dtype=float, count=len(samples))
    ratios = np.fromiter((s.ratio for s in samples), dtype=float, count=len(samples))
    return quantiles, ratios


def partition_groups(samples: Sequence[RatioSample], n: int) -> GroupPartition:
    """Equal-count groups by ascending sale quantile; the first ``m % n`` groups get one extra."""
    m = len(samples)
    if n < 2:
        raise PartitionError(f"Group count must be at least 2, got {n}")
    if m < n:
        raise PartitionError(f"Cannot split {m} samples into {n} groups")

    quantiles, _ = _arrays(samples)
    # lexsort keys are last-major: quantile first, original index second
    order = np.lexsort((np.arange(m), quantiles))
    base, extra = divmod(m, n)
    sizes = tuple(base + (1 if g < extra else 0) for g in range(n))

    group_of = np.empty(m, dtype=int)
    boundaries = []
    start = 0
    for g, size in enumerate(sizes, start=1):
        group_of[order[start : start + size]] = g
        start += size
        if g < n:
            boundaries.append(float(quantiles[order[start - 1]]))
    return GroupPartition(n=n, boundaries=tuple(boundaries), group_of=tuple(group_of.tolist()), group_sizes=sizes)


def _negated(total: float) -> float:
    return -total if total else 0.0


def _group_ratios(samples: Sequence[RatioSample], partition: GroupPartition) -> list[np.ndarray]:
    if len(partition.group_of) != len(samples):
        raise PartitionError(f"Partition covers {len(partition.group_of)} samples, got {len(samples)}")
    _, ratios = _arrays(samples)
    labels = np.asarray(partition.group_of)
    return [ratios[labels == g] for g in range(1, partition.n + 1)]


def group_fairness_bruteforce(samples: Sequence[RatioSample], partition: GroupPartition) -> float:
    """Reference O(m^2) evaluation of the group fairness score."""
    groups = _group_ratios(samples, partition)
    terms = []
    for a in range(partition.n):
        for b in range(a + 1, partition.n):
            lower, upper = groups[a], groups[b]
            if lower.size == 0 or upper.size == 0:
                continue
            excess = np.maximum(lower[:, None] - upper[None, :], 0.0)
            terms.append(math.fsum(excess.ravel()) / (lower.size * upper.size))
    return _negated(math.fsum(terms))


def _pair_excess(lower: np.ndarray, upper: np.ndarray) -> float:
    """``sum_{i in lower, j in upper} (r_i - r_j)^+`` via sorting and prefix sums."""
    ordered = np.sort(upper)
    prefix = np.concatenate(([0.0], np.cumsum(ordered)))
    # upper ratios strictly below r_i contribute; ties add zero either way
    counts = np.searchsorted(ordered, lower, side="left")
    contributions = np.maximum(counts * lower - prefix[counts], 0.0)
    return math.fsum(contributions)


def group_fairness_fast(samples: Sequence[RatioSample], partition: GroupPartition) -> float:
    groups = _group_ratios(samples, partition)
    terms = []
    for a in range(partition.n):
        for b in range(a + 1, partition.n):
            lower, upper = groups[a], groups[b]
            if lower.size == 0 or upper.size == 0:
                continue
            terms.append(_pair_excess(lower, upper) / (lower.size * upper.size))
    return _negated(math.fsum(terms))


def group_fairness(samples: Sequence[RatioSample], n: int) -> float:
    return group_fairness_fast(samples, partition_groups(samples, n))


def deviation_weighted_fairness(samples: Sequence[RatioSample], alpha: float) -> float:
    """Overassessment is penalised most at low sale quantiles, underassessment at high ones."""
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    quantiles, ratios = _arrays(samples)
    over = np.maximum(ratios - 1.0, 0.0) * np.exp(-alpha * quantiles)
    under = np.maximum(1.0 - ratios, 0.0) * np.exp(-alpha * (1.0 - quantiles))
    return _negated(math.fsum(np.concatenate((over, under))))


def relative_unfairness(model_score: float, original_score: float) -> float:
    if original_score == 0:
        raise DegenerateScoreError(
            "Baseline fairness score is 0; relative unfairness is undefined, report raw scores instead"
        )
    return model_score / original_score
