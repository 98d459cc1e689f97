"""Goodness-of-fit scores shared by tuning and evaluation."""

from __future__ import annotations

import math

import numpy as np


class VarianceError(ValueError):
    """Raised when R^2 is undefined because every truth value is identical."""


def r_squared(predictions, truths) -> float:
    """Coefficient of determination ``1 - SS_res / SS_tot``."""
    p = np.asarray(predictions, dtype=float)
    t = np.asarray(truths, dtype=float)
    if p.shape != t.shape or p.ndim != 1:
        raise ValueError(f"Predictions and truths must be equal-length vectors, got {p.shape} and {t.shape}")
    if t.size == 0:
        raise ValueError("R^2 needs at least one observation")
    if np.all(t == t[0]):
        raise VarianceError("Truth values have zero variance; R^2 is undefined")

    mean = math.fsum(t) / t.size
    ss_res = math.fsum((t - p) ** 2)
    ss_tot = math.fsum((t - mean) ** 2)
    return 1.0 - ss_res / ss_tot
