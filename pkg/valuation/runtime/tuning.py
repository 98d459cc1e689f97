"""Seeded random search over learner hyper-parameters, scored on rolling-origin folds."""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from ..dataset.records import feature_matrix, sale_prices
from ..dataset.splits import Fold
from .gbm import GBMConfig, TrainingError, fit, predict_many
from .scoring import VarianceError, r_squared

logger = logging.getLogger(__name__)

# Stand-in ranges; nothing here is calibrated against a production assessor's grid.
SEARCH_SPACE: dict[str, tuple] = {
    "num_trees": (50, 100, 200),
    "learning_rate": (0.05, 0.1, 0.2),
    "max_depth": (2, 3, 4),
    "min_samples_leaf": (10, 20, 40),
}


def sample_configs(config: GBMConfig, count: int) -> list[GBMConfig]:
    """Draw ``count`` configurations from ``SEARCH_SPACE`` using ``config.seed``."""
    rng = np.random.default_rng(config.seed)
    samples = []
    for _ in range(count):
        update = {name: values[int(rng.integers(len(values)))] for name, values in SEARCH_SPACE.items()}
        samples.append(config.model_copy(update=update))
    return samples


def cross_validated_r2(folds: Sequence[Fold], config: GBMConfig) -> float:
    """Mean validation R^2 (raw price scale) across folds."""
    if not folds:
        raise TrainingError("Cross-validation needs at least one fold")
    scores = []
    for fold in folds:
        model = fit(feature_matrix(fold.fit), sale_prices(fold.fit), config)
        predictions = predict_many(model, feature_matrix(fold.validation, model.feature_dim))
        scores.append(r_squared(predictions, sale_prices(fold.validation)))
    return math.fsum(scores) / len(scores)


def tune(folds: Sequence[Fold], config: GBMConfig) -> GBMConfig:
    """Return the best of ``random_search_budget`` sampled configurations.

    With a budget of 2 or more the incoming configuration competes as well, so
    the result never scores below it. A budget of 1 returns the sample as is.
    """
    budget = config.random_search_budget
    if budget == 0:
        return config

    candidates = sample_configs(config, budget)
    if budget == 1:
        return candidates[0]
    candidates = [config, *candidates]

    best: GBMConfig | None = None
    best_score = -math.inf
    for candidate in candidates:
        try:
            score = cross_validated_r2(folds, candidate)
        except (TrainingError, VarianceError) as exc:
            logger.warning("Skipping candidate %s: %s", candidate.model_dump(), exc)
            continue
        logger.debug("Candidate %s scored %.6f", candidate.model_dump(), score)
        if score > best_score:
            best, best_score = candidate, score

    if best is None:
        raise TrainingError("No hyper-parameter candidate could be evaluated on the folds")
    logger.info("Random search (budget=%d) selected %s with mean R^2 %.6f", budget, best.model_dump(), best_score)
    return best
