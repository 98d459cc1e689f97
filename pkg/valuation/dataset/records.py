"""Property records and the empirical quantile index used for segmentation and fairness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class DatasetError(ValueError):
    """Raised when property data is missing, empty or inconsistent."""


@dataclass(frozen=True)
class PropertyRecord:
    """One property of an assessment roll.

    ``sale_price`` is ``None`` for unsold rows of the assessment year.
    ``sale_date`` is an ordinal year-month period index.
    """

    id: str
    features: tuple[float, ...]
    sale_price: Optional[float]
    sale_date: int
    prior_assessment: float

    def __post_init__(self) -> None:
        if self.sale_price is not None and not self.sale_price > 0:
            raise DatasetError(f"Record {self.id}: sale_price must be positive, got {self.sale_price}")
        if not self.prior_assessment > 0:
            raise DatasetError(
                f"Record {self.id}: prior_assessment must be positive, got {self.prior_assessment}"
            )

    @property
    def is_sold(self) -> bool:
        return self.sale_price is not None


@dataclass(frozen=True, eq=False)
class QuantileIndex:
    """Sorted reference population answering ``N(x) / m`` queries."""

    sorted_values: np.ndarray

    @property
    def population_size(self) -> int:
        return int(self.sorted_values.shape[0])

    def quantile_of(self, x: float) -> float:
        return quantile_of(self, x)

    def quantiles(self, values: Iterable[float] | np.ndarray) -> np.ndarray:
        """Vectorized ``quantile_of`` over many values."""
        array = np.asarray(values, dtype=float)
        counts = np.searchsorted(self.sorted_values, array, side="right")
        return counts / self.population_size


def build_quantile_index(values: Iterable[float] | np.ndarray) -> QuantileIndex:
    if not isinstance(values, np.ndarray):
        values = list(values)
    array = np.sort(np.asarray(values, dtype=float))
    if array.size == 0:
        raise DatasetError("Cannot build a quantile index from an empty population")
    array.setflags(write=False)
    return QuantileIndex(sorted_values=array)


def quantile_of(index: QuantileIndex, x: float) -> float:
    """Share of the indexed population with value <= ``x`` (ties counted, no interpolation)."""
    count = int(np.searchsorted(index.sorted_values, x, side="right"))
    return count / index.population_size


def feature_matrix(records: Sequence[PropertyRecord], feature_dim: Optional[int] = None) -> np.ndarray:
    """Stack record features into an ``(n, F)`` array, checking a single declared dimension."""
    if not records:
        width = feature_dim or 0
        return np.empty((0, width), dtype=float)

    expected = feature_dim if feature_dim is not None else len(records[0].features)
    for position, record in enumerate(records):
        if len(record.features) != expected:
            raise DatasetError(
                f"Record {record.id} (row {position}) has {len(record.features)} features, expected {expected}"
            )
    return np.asarray([record.features for record in records], dtype=float).reshape(len(records), expected)


def sale_prices(records: Sequence[PropertyRecord]) -> np.ndarray:
    """Sale prices of sold records; raises when any record is unsold."""
    missing = [record.id for record in records if record.sale_price is None]
    if missing:
        raise DatasetError(f"{len(missing)} records have no sale price (first: {missing[0]})")
    return np.asarray([record.sale_price for record in records], dtype=float)


def prior_assessments(records: Sequence[PropertyRecord]) -> np.ndarray:
    return np.asarray([record.prior_assessment for record in records], dtype=float)
