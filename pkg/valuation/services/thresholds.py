"""Grid search over segmentation thresholds, scored by test-set R^2."""

from __future__ import annotations

import itertools
import logging
from typing import Sequence

from ..dataset.records import PropertyRecord, sale_prices
from ..runtime.gbm import GBMConfig, TrainingError
from ..runtime.ksegment import assess_many, train_ksegment
from ..runtime.scoring import VarianceError, r_squared
from ..runtime.segmentation import DomainError, SegmentationScheme, SmoothingSpec

logger = logging.getLogger(__name__)


def quantile_threshold_grid(K: int, step: float = 0.05, min_width: float = 0.05) -> list[SegmentationScheme]:  # noqa: N803
    """Every scheme with interior thresholds on a ``step`` lattice and segments at least ``min_width`` wide."""
    if K < 1:
        raise ValueError(f"K must be positive, got {K}")
    if not 0 < step < 1:
        raise ValueError(f"step must lie in (0, 1), got {step}")
    lattice = []
    i = 1
    while i * step < 1 - 1e-9:
        lattice.append(round(i * step, 10))
        i += 1
    schemes = []
    for interior in itertools.combinations(lattice, K - 1):
        eta = (0.0, *interior, 1.0)
        if all(hi - lo >= min_width - 1e-12 for lo, hi in zip(eta, eta[1:])):
            schemes.append(SegmentationScheme(eta=eta))
    return schemes


def select_thresholds(
    train: Sequence[PropertyRecord],
    test: Sequence[PropertyRecord],
    candidates: Sequence[SegmentationScheme],
    spec: SmoothingSpec,
    gbm_config: GBMConfig,
) -> tuple[SegmentationScheme, list[tuple[SegmentationScheme, float]]]:
    """Return the candidate with the highest test R^2 plus every scored candidate.

    Candidates that leave a segment empty or clash with the smoothing
    parameters are skipped. The first of equally scoring candidates wins.
    """
    truths = sale_prices(test)
    scored: list[tuple[SegmentationScheme, float]] = []
    best: tuple[SegmentationScheme, float] | None = None
    for scheme in candidates:
        try:
            model = train_ksegment(train, scheme, spec, gbm_config)
            score = r_squared(assess_many(model, test), truths)
        except (TrainingError, DomainError, VarianceError) as exc:
            logger.warning("Skipping thresholds %s: %s", list(scheme.eta), exc)
            continue
        scored.append((scheme, score))
        if best is None or score > best[1]:
            best = (scheme, score)

    if best is None:
        raise TrainingError("No threshold candidate could be trained and scored")
    logger.info("Selected thresholds %s (test R^2 %.6f) from %d candidates", list(best[0].eta), best[1], len(scored))
    return best[0], scored

