"""Chronological train/test splits with rolling-origin validation folds."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

from pydantic import BaseModel, Field

from .records import DatasetError, PropertyRecord

logger = logging.getLogger(__name__)


class SplitError(DatasetError):
    """Raised when records cannot be split into the requested folds."""


class SplitSpec(BaseModel):
    train_fraction: float = Field(default=0.9, gt=0.0, le=1.0)
    validation_windows: int = Field(default=3, ge=1)


@dataclass(frozen=True)
class Fold:
    """One rolling-origin fold: fit on every period before ``validation_period``."""

    fit: tuple[PropertyRecord, ...]
    validation: tuple[PropertyRecord, ...]
    validation_period: int


@dataclass(frozen=True)
class SplitResult:
    train: tuple[PropertyRecord, ...]
    test: tuple[PropertyRecord, ...]
    folds: tuple[Fold, ...]


def _chronological(records: Sequence[PropertyRecord]) -> list[PropertyRecord]:
    return sorted(records, key=lambda record: record.sale_date)


def make_splits(records: Sequence[PropertyRecord], spec: SplitSpec) -> SplitResult:
    """Hold out the chronologically last share of sold records and build expanding folds.

    The cut falls on a period boundary: the period of the first held-out
    record goes entirely to the test set so no period straddles both sides.
    """
    sold = _chronological([record for record in records if record.is_sold])
    if not sold:
        raise SplitError("No sold records to split")

    n_train = min(len(sold), math.floor(spec.train_fraction * len(sold) + 1e-9))
    if n_train < len(sold):
        cutoff = sold[n_train].sale_date
        train = [record for record in sold if record.sale_date < cutoff]
        test = [record for record in sold if record.sale_date >= cutoff]
    else:
        train, test = sold, []

    periods = sorted({record.sale_date for record in train})
    if len(periods) < spec.validation_windows + 1:
        raise SplitError(
            f"Need at least {spec.validation_windows + 1} distinct training periods "
            f"for {spec.validation_windows} validation windows, found {len(periods)}"
        )

    folds = []
    for period in periods[-spec.validation_windows :]:
        fit = tuple(record for record in train if record.sale_date < period)
        validation = tuple(record for record in train if record.sale_date == period)
        folds.append(Fold(fit=fit, validation=validation, validation_period=period))

    logger.info(
        "Split %d sold records into train=%d test=%d with %d rolling-origin folds",
        len(sold),
        len(train),
        len(test),
        len(folds),
    )
    return SplitResult(train=tuple(train), test=tuple(test), folds=tuple(folds))


def partition_assessment(
    records: Sequence[PropertyRecord], assessment_periods: int = 1
) -> tuple[list[PropertyRecord], list[PropertyRecord]]:
    """Separate the assessment year from the training data.

    Rows in the last ``assessment_periods`` distinct periods, and every unsold
    row, form the assessment set. ``assessment_periods=0`` keeps only unsold
    rows for assessment.
    """
    if assessment_periods < 0:
        raise SplitError("assessment_periods must be non-negative")
    periods = sorted({record.sale_date for record in records})
    held = set(periods[-assessment_periods:]) if assessment_periods else set()
    if held and len(held) == len(periods):
        raise SplitError("Assessment periods cover every period; nothing is left for training")

    training_data = [r for r in records if r.is_sold and r.sale_date not in held]
    assessment_data = [r for r in records if not r.is_sold or r.sale_date in held]
    return training_data, assessment_data
