"""Property rolls: records, quantiles, synthetic markets and chronological splits."""

from .columns import ColumnSchema
from .records import (
    DatasetError,
    PropertyRecord,
    QuantileIndex,
    build_quantile_index,
    feature_matrix,
    prior_assessments,
    quantile_of,
    sale_prices,
)
from .splits import Fold, SplitError, SplitResult, SplitSpec, make_splits, partition_assessment
from .synthetic import SyntheticMarketConfig, feature_names, generate_synthetic

__all__ = [
    # Records
    "ColumnSchema",
    "DatasetError",
    "PropertyRecord",
    "QuantileIndex",
    "build_quantile_index",
    "quantile_of",
    "feature_matrix",
    "sale_prices",
    "prior_assessments",
    # Splits
    "Fold",
    "SplitError",
    "SplitResult",
    "SplitSpec",
    "make_splits",
    "partition_assessment",
    # Synthetic markets
    "SyntheticMarketConfig",
    "feature_names",
    "generate_synthetic",
]
