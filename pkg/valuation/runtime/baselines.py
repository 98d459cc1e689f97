"""Trivial reference learners sharing the ``GBMModel`` interface."""

from __future__ import annotations

import math

from .gbm import GBMConfig, GBMModel, TrainingError


def constant_model(value: float, feature_dim: int) -> GBMModel:
    """A zero-tree model that predicts ``value`` exactly for any input."""
    if not math.isfinite(value):
        raise TrainingError(f"Constant model value must be finite, got {value}")
    if feature_dim < 1:
        raise TrainingError("feature_dim must be positive")
    config = GBMConfig(num_trees=0, target_transform="identity", min_samples_leaf=1)
    return GBMModel(base_score=float(value), trees=(), config=config, feature_dim=feature_dim)


def mean_model(targets, feature_dim: int) -> GBMModel:
    """Predicts the arithmetic mean of ``targets``; the no-skill reference for R^2."""
    values = [float(t) for t in targets]
    if not values:
        raise TrainingError("mean_model needs at least one target")
    return constant_model(math.fsum(values) / len(values), feature_dim)
