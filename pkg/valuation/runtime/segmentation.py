"""Quantile segmentation and the rules that blend submodel predictions.

A scheme cuts the prior-assessment quantile axis ``[0, 1]`` at thresholds
``eta``. Four combination rules are supported:

* ``unsmoothed``: the single submodel owning ``y``.
* ``quantile``: a shifted sigmoid ``g_k`` hands weight from ``S_k`` to
  ``S_{k+1}`` over ``[eta_k - lambda_k, gamma_k)``.
* ``midpoint_score`` / ``distance_score``: every submodel is weighted by a
  normalized exponential score of the distance from ``y`` to the segment's
  midpoint or to the segment itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class DomainError(ValueError):
    """Raised when a quantile or smoothing parameter is outside its valid domain."""


class SmoothingMethod(str, Enum):
    UNSMOOTHED = "unsmoothed"
    QUANTILE = "quantile"
    MIDPOINT_SCORE = "midpoint_score"
    DISTANCE_SCORE = "distance_score"


class SegmentationScheme(BaseModel):
    """Thresholds ``eta_0 = 0 < eta_1 < ... < eta_K = 1``."""

    model_config = ConfigDict(frozen=True)

    eta: tuple[float, ...]

    @model_validator(mode="after")
    def _check_thresholds(self) -> "SegmentationScheme":
        if len(self.eta) < 2:
            raise ValueError("eta needs at least the two endpoints 0 and 1")
        if self.eta[0] != 0.0 or self.eta[-1] != 1.0:
            raise ValueError(f"eta must start at 0 and end at 1, got {self.eta}")
        if any(lo >= hi for lo, hi in zip(self.eta, self.eta[1:])):
            raise ValueError(f"eta must be strictly increasing, got {self.eta}")
        return self

    @property
    def K(self) -> int:  # noqa: N802 - matches the model's notation
        return len(self.eta) - 1

    @classmethod
    def from_thresholds(cls, interior: Sequence[float]) -> "SegmentationScheme":
        return cls(eta=(0.0, *[float(v) for v in interior], 1.0))

    def interval(self, k: int) -> tuple[float, float]:
        """Bounds of segment ``k`` (1-based)."""
        return self.eta[k - 1], self.eta[k]


class SmoothingSpec(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    method: SmoothingMethod = SmoothingMethod.UNSMOOTHED
    lam: tuple[float, ...] = Field(default=(), alias="lambda")
    gamma: tuple[float, ...] = ()
    mu: float = Field(default=10.0, gt=0.0)

    @model_validator(mode="after")
    def _check_quantile_params(self) -> "SmoothingSpec":
        if self.method is SmoothingMethod.QUANTILE and any(v <= 0 for v in self.lam):
            raise ValueError(f"lambda values must be positive, got {self.lam}")
        return self


@dataclass(frozen=True)
class WeightVector:
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(w < 0 for w in self.weights):
            raise ValueError(f"Weights must be nonnegative, got {self.weights}")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError(f"Weights must sum to 1, got {math.fsum(self.weights)!r}")

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, k: int) -> float:
        return self.weights[k]


def validate_smoothing(scheme: SegmentationScheme, spec: SmoothingSpec) -> None:
    """Cross-check smoothing parameters against the thresholds they refer to."""
    if spec.method is not SmoothingMethod.QUANTILE:
        return
    K = scheme.K
    if len(spec.lam) != K - 1 or len(spec.gamma) != K - 1:
        raise DomainError(
            f"Quantile smoothing with K={K} needs {K - 1} lambda and gamma values, "
            f"got {len(spec.lam)} and {len(spec.gamma)}"
        )
    eta = scheme.eta
    for k in range(1, K):
        lam, gamma = spec.lam[k - 1], spec.gamma[k - 1]
        if lam <= 0:
            raise DomainError(f"lambda_{k} must be positive, got {lam}")
        if not eta[k - 1] <= eta[k] - lam:
            raise DomainError(f"lambda_{k}={lam} reaches below eta_{k - 1}={eta[k - 1]}")
        if not eta[k] < gamma <= eta[k + 1]:
            raise DomainError(f"gamma_{k}={gamma} must lie in (eta_{k}, eta_{k + 1}] = ({eta[k]}, {eta[k + 1]}]")
        if k + 1 < K and gamma > eta[k + 1] - spec.lam[k]:
            raise DomainError(
                f"Blend intervals {k} and {k + 1} overlap: gamma_{k}={gamma} > eta_{k + 1} - lambda_{k + 1}"
            )


def _check_quantiles(ys: np.ndarray) -> None:
    if ys.size and not (np.all(ys >= 0.0) and np.all(ys <= 1.0)):
        bad = ys[~((ys >= 0.0) & (ys <= 1.0))][0]
        raise DomainError(f"Quantile {bad} is outside [0, 1]")


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def assign_segments(scheme: SegmentationScheme, ys) -> np.ndarray:
    """Vectorized ``assign_segment``; a quantile equal to ``eta_k`` (k < K) belongs to ``k + 1``."""
    values = np.atleast_1d(np.asarray(ys, dtype=float))
    _check_quantiles(values)
    segments = np.searchsorted(np.asarray(scheme.eta), values, side="right")
    return np.minimum(segments, scheme.K)


def assign_segment(scheme: SegmentationScheme, y: float) -> int:
    return int(assign_segments(scheme, [y])[0])


def _blend(scheme: SegmentationScheme, spec: SmoothingSpec, k: int, ys: np.ndarray) -> np.ndarray:
    eta_k = scheme.eta[k]
    lam, gamma = spec.lam[k - 1], spec.gamma[k - 1]
    slope = -10.0 / (gamma - eta_k + lam)
    return _sigmoid(slope * (ys - gamma) - 5.0)


def sigmoid_blend(scheme: SegmentationScheme, spec: SmoothingSpec, k: int, y: float) -> float:
    """``g_k(y)``: decreases from sigma(5) at ``eta_k - lambda_k`` to sigma(-5) at ``gamma_k``."""
    if spec.method is not SmoothingMethod.QUANTILE:
        raise DomainError(f"sigmoid_blend needs quantile smoothing, got {spec.method.value}")
    validate_smoothing(scheme, spec)
    if not 1 <= k <= scheme.K - 1:
        raise DomainError(f"Boundary index k={k} outside 1..{scheme.K - 1}")
    lower, upper = scheme.eta[k] - spec.lam[k - 1], spec.gamma[k - 1]
    if not lower <= y <= upper:
        raise DomainError(f"y={y} outside the blend domain [{lower}, {upper}] of g_{k}")
    return float(_blend(scheme, spec, k, np.asarray([y], dtype=float))[0])


def _score_matrix(scheme: SegmentationScheme, mu: float, ys: np.ndarray, *, midpoint: bool) -> np.ndarray:
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    _check_quantiles(ys)
    eta = np.asarray(scheme.eta)
    lower, upper = eta[:-1], eta[1:]
    widths = upper - lower
    column = ys[:, None]
    if midpoint:
        distance = np.abs(column - (upper + lower) / 2.0)
    else:
        distance = np.maximum(np.maximum(lower - column, column - upper), 0.0)
    return np.exp(-(mu / widths) * distance)


def midpoint_scores(scheme: SegmentationScheme, mu: float, y: float) -> list[float]:
    return _score_matrix(scheme, mu, np.asarray([y], dtype=float), midpoint=True)[0].tolist()


def distance_scores(scheme: SegmentationScheme, mu: float, y: float) -> list[float]:
    return _score_matrix(scheme, mu, np.asarray([y], dtype=float), midpoint=False)[0].tolist()


def weight_matrix(scheme: SegmentationScheme, spec: SmoothingSpec, ys) -> np.ndarray:
    """Submodel weights for many quantiles at once, shape ``(n, K)``."""
    values = np.atleast_1d(np.asarray(ys, dtype=float))
    K = scheme.K
    method = spec.method

    if method in (SmoothingMethod.MIDPOINT_SCORE, SmoothingMethod.DISTANCE_SCORE):
        scores = _score_matrix(scheme, spec.mu, values, midpoint=method is SmoothingMethod.MIDPOINT_SCORE)
        return scores / scores.sum(axis=1, keepdims=True)

    segments = assign_segments(scheme, values)
    weights = np.zeros((values.shape[0], K), dtype=float)
    weights[np.arange(values.shape[0]), segments - 1] = 1.0
    if method is SmoothingMethod.UNSMOOTHED:
        return weights

    validate_smoothing(scheme, spec)
    for k in range(1, K):
        lower, upper = scheme.eta[k] - spec.lam[k - 1], spec.gamma[k - 1]
        inside = (values >= lower) & (values < upper)
        if not inside.any():
            continue
        g = _blend(scheme, spec, k, values[inside])
        weights[inside] = 0.0
        weights[inside, k - 1] = g
        weights[inside, k] = 1.0 - g
    return weights


def weights(scheme: SegmentationScheme, spec: SmoothingSpec, y: float) -> WeightVector:
    return WeightVector(weights=tuple(weight_matrix(scheme, spec, [y])[0].tolist()))


def weight_curves(
    scheme: SegmentationScheme, spec: SmoothingSpec, num_points: int = 101
) -> tuple[np.ndarray, np.ndarray]:
    """Evenly spaced quantile grid over ``[0, 1]`` and the weights at each point."""
    if num_points < 2:
        raise DomainError("A weight curve needs at least two grid points")
    grid = np.linspace(0.0, 1.0, num_points)
    return grid, weight_matrix(scheme, spec, grid)
