"""Fairness measures, trends, frontiers and the experiment pipeline."""

from .experiment import ExperimentResult, StageError, VariantResult, run_experiment
from .fairness import (
    DegenerateScoreError,
    FairnessConfig,
    GroupPartition,
    PartitionError,
    RatioSample,
    deviation_weighted_fairness,
    group_fairness,
    group_fairness_bruteforce,
    group_fairness_fast,
    partition_groups,
    ratio_samples,
    relative_unfairness,
    sta_ratios,
)
from .pareto import ParetoPoint, dominates, pareto_frontier
from .thresholds import quantile_threshold_grid, select_thresholds
from .trends import TrendBin, trend_bins, trend_spread

__all__ = [
    # Fairness
    "RatioSample",
    "GroupPartition",
    "FairnessConfig",
    "PartitionError",
    "DegenerateScoreError",
    "ratio_samples",
    "sta_ratios",
    "partition_groups",
    "group_fairness",
    "group_fairness_bruteforce",
    "group_fairness_fast",
    "deviation_weighted_fairness",
    "relative_unfairness",
    # Trends and frontiers
    "TrendBin",
    "trend_bins",
    "trend_spread",
    "ParetoPoint",
    "dominates",
    "pareto_frontier",
    # Threshold search
    "quantile_threshold_grid",
    "select_thresholds",
    # Pipeline
    "ExperimentResult",
    "VariantResult",
    "StageError",
    "run_experiment",
]
