"""K-segment ensemble: one learner per prior-assessment quantile segment.

Submodels are fit on hard-assigned segment populations. Smoothing only changes
how their predictions are combined at assessment time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..dataset.records import (
    DatasetError,
    PropertyRecord,
    QuantileIndex,
    build_quantile_index,
    feature_matrix,
    prior_assessments,
    sale_prices,
)
from .gbm import GBMConfig, GBMModel, PredictionError, TrainingError, fit, predict_many
from .segmentation import (
    SegmentationScheme,
    SmoothingSpec,
    assign_segments,
    validate_smoothing,
    weight_matrix,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class KSegmentModel:
    scheme: SegmentationScheme
    spec: SmoothingSpec
    submodels: tuple[GBMModel, ...]
    prior_index: QuantileIndex
    feature_dim: int
    segment_counts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(self.submodels) != self.scheme.K:
            raise TrainingError(f"Expected {self.scheme.K} submodels, got {len(self.submodels)}")
        if any(sub.feature_dim != self.feature_dim for sub in self.submodels):
            raise TrainingError("All submodels must share the ensemble feature dimension")
        if self.prior_index.population_size == 0:
            raise TrainingError("prior_index must not be empty")

    @property
    def K(self) -> int:  # noqa: N802
        return self.scheme.K


def train_ksegment(
    train: Sequence[PropertyRecord],
    scheme: SegmentationScheme,
    spec: SmoothingSpec,
    gbm_config: GBMConfig,
) -> KSegmentModel:
    if not train:
        raise TrainingError("Cannot train a K-segment model on an empty training set")
    validate_smoothing(scheme, spec)

    try:
        matrix = feature_matrix(train)
        targets = sale_prices(train)
    except DatasetError as exc:
        raise TrainingError(str(exc)) from exc
    priors = prior_assessments(train)

    prior_index = build_quantile_index(priors)
    segments = assign_segments(scheme, prior_index.quantiles(priors))

    submodels = []
    counts = []
    for k in range(1, scheme.K + 1):
        rows = np.flatnonzero(segments == k)
        lower, upper = scheme.interval(k)
        if rows.size == 0:
            raise TrainingError(f"Segment {k} with quantile interval [{lower}, {upper}] received no training records")
        try:
            submodels.append(fit(matrix[rows], targets[rows], gbm_config))
        except TrainingError as exc:
            raise TrainingError(f"Segment {k} [{lower}, {upper}]: {exc}") from exc
        counts.append(int(rows.size))

    logger.info("Trained K=%d model (%s) on segment sizes %s", scheme.K, spec.method.value, counts)
    return KSegmentModel(
        scheme=scheme,
        spec=spec,
        submodels=tuple(submodels),
        prior_index=prior_index,
        feature_dim=matrix.shape[1],
        segment_counts=tuple(counts),
    )


def prior_quantiles(model: KSegmentModel, records: Sequence[PropertyRecord]) -> np.ndarray:
    """Quantile ``y`` of each record's prior assessment in the training population."""
    return model.prior_index.quantiles(prior_assessments(records))


def assess_many(model: KSegmentModel, records: Sequence[PropertyRecord]) -> np.ndarray:
    """Weighted combination of submodel predictions for every record."""
    if not records:
        return np.empty(0, dtype=float)
    try:
        matrix = feature_matrix(records, model.feature_dim)
    except DatasetError as exc:
        raise PredictionError(str(exc)) from exc

    weights = weight_matrix(model.scheme, model.spec, prior_quantiles(model, records))
    predictions = np.column_stack([predict_many(sub, matrix) for sub in model.submodels])
    return np.sum(weights * predictions, axis=1)


def assess(model: KSegmentModel, record: PropertyRecord) -> float:
    return float(assess_many(model, [record])[0])
