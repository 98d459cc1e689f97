"""Least-squares gradient-boosted regression trees used for every submodel.

Splits are exact and greedy on raw feature values. Equal-gain candidates are
resolved toward the lowest feature index, then the lowest threshold, so a fit
is reproducible from its config and data alone.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)


class TrainingError(RuntimeError):
    """Raised when a model cannot be fit on the given data."""


class PredictionError(ValueError):
    """Raised when inputs do not match what a trained model expects."""


class GBMConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_trees: int = Field(default=100, ge=0)
    learning_rate: float = Field(default=0.1, gt=0.0, le=1.0)
    max_depth: int = Field(default=3, ge=1)
    min_samples_leaf: int = Field(default=20, ge=1)
    target_transform: Literal["identity", "log"] = "log"
    random_search_budget: int = Field(default=0, ge=0)
    seed: int = 0


@dataclass(frozen=True)
class TreeLeaf:
    value: float


@dataclass(frozen=True)
class TreeSplit:
    """Internal node; samples with ``x[feature] <= threshold`` go left."""

    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[TreeLeaf, TreeSplit]


@dataclass(frozen=True, eq=False)
class GBMModel:
    base_score: float
    trees: tuple[TreeNode, ...]
    config: GBMConfig
    feature_dim: int

    def predict(self, features) -> float:
        return predict(self, features)


def _transform(targets: np.ndarray, config: GBMConfig) -> np.ndarray:
    if config.target_transform == "log":
        if np.any(targets <= 0):
            raise TrainingError("Log target transform requires strictly positive targets")
        return np.log(targets)
    return targets.astype(float, copy=True)


def _inverse(raw: np.ndarray, config: GBMConfig) -> np.ndarray:
    if config.target_transform == "log":
        return np.exp(raw)
    return raw


def _best_split(
    features: np.ndarray,
    residuals: np.ndarray,
    presorted: list[np.ndarray],
    mask: np.ndarray,
    min_samples_leaf: int,
    min_gain: float,
) -> tuple[int, float] | None:
    best: tuple[int, float] | None = None
    best_gain = min_gain
    for j, order in enumerate(presorted):
        rows = order[mask[order]]
        xs = features[rows, j]
        rs = residuals[rows]
        n = rs.shape[0]

        csum = np.cumsum(rs)
        total = csum[-1]
        left_n = np.arange(1, n, dtype=float)
        right_n = n - left_n
        left_s = csum[:-1]
        right_s = total - left_s

        valid = (xs[:-1] < xs[1:]) & (left_n >= min_samples_leaf) & (right_n >= min_samples_leaf)
        if not valid.any():
            continue
        gain = np.where(valid, left_s**2 / left_n + right_s**2 / right_n - total**2 / n, -np.inf)
        position = int(np.argmax(gain))
        if gain[position] > best_gain:
            best_gain = float(gain[position])
            best = (j, float(xs[position]))
    return best


def _grow(
    features: np.ndarray,
    residuals: np.ndarray,
    presorted: list[np.ndarray],
    mask: np.ndarray,
    depth: int,
    config: GBMConfig,
) -> TreeNode:
    node_residuals = residuals[mask]
    count = node_residuals.shape[0]
    value = math.fsum(node_residuals) / count
    if depth >= config.max_depth or count < 2 * config.min_samples_leaf:
        return TreeLeaf(value=value)

    node_sse = float(np.sum((node_residuals - value) ** 2))
    if node_sse <= 1e-24 * count:
        return TreeLeaf(value=value)

    split = _best_split(
        features, residuals, presorted, mask, config.min_samples_leaf, min_gain=1e-12 * node_sse
    )
    if split is None:
        return TreeLeaf(value=value)

    feature, threshold = split
    goes_left = features[:, feature] <= threshold
    return TreeSplit(
        feature=feature,
        threshold=threshold,
        left=_grow(features, residuals, presorted, mask & goes_left, depth + 1, config),
        right=_grow(features, residuals, presorted, mask & ~goes_left, depth + 1, config),
    )


def _fill(node: TreeNode, features: np.ndarray, rows: np.ndarray, out: np.ndarray) -> None:
    if isinstance(node, TreeLeaf):
        out[rows] = node.value
        return
    goes_left = features[rows, node.feature] <= node.threshold
    _fill(node.left, features, rows[goes_left], out)
    _fill(node.right, features, rows[~goes_left], out)


def tree_output(node: TreeNode, features: np.ndarray) -> np.ndarray:
    """Leaf value reached by every row of ``features``."""
    out = np.empty(features.shape[0], dtype=float)
    _fill(node, features, np.arange(features.shape[0]), out)
    return out


def tree_depth(node: TreeNode) -> int:
    if isinstance(node, TreeLeaf):
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def fit(features, targets, config: GBMConfig) -> GBMModel:
    """Boost depth-limited regression trees on the residuals of the transformed target."""
    matrix = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if matrix.ndim != 2 or y.ndim != 1 or matrix.shape[0] != y.shape[0]:
        raise TrainingError(
            f"Expected an (n, F) feature matrix and n targets, got {matrix.shape} and {y.shape}"
        )
    n, feature_dim = matrix.shape
    if n < 2:
        raise TrainingError(f"At least 2 samples are required, got {n}")
    if n < config.min_samples_leaf:
        raise TrainingError(f"{n} samples is fewer than min_samples_leaf={config.min_samples_leaf}")
    if not (np.all(np.isfinite(matrix)) and np.all(np.isfinite(y))):
        raise TrainingError("Features and targets must be finite")

    z = _transform(y, config)
    base_score = math.fsum(z) / n
    current = np.full(n, base_score)
    presorted = [np.argsort(matrix[:, j], kind="stable") for j in range(feature_dim)]
    everyone = np.ones(n, dtype=bool)

    trees: list[TreeNode] = []
    for _ in range(config.num_trees):
        residuals = z - current
        tree = _grow(matrix, residuals, presorted, everyone, 0, config)
        current = current + config.learning_rate * tree_output(tree, matrix)
        trees.append(tree)

    logger.debug(
        "Fit %d trees on %d samples (F=%d, depth<=%d)", len(trees), n, feature_dim, config.max_depth
    )
    return GBMModel(base_score=base_score, trees=tuple(trees), config=config, feature_dim=feature_dim)


def predict_many(model: GBMModel, features) -> np.ndarray:
    matrix = np.asarray(features, dtype=float)
    if matrix.ndim != 2 or matrix.shape[1] != model.feature_dim:
        raise PredictionError(
            f"Model expects {model.feature_dim} features per row, got shape {matrix.shape}"
        )
    total = np.zeros(matrix.shape[0], dtype=float)
    for tree in model.trees:
        total += tree_output(tree, matrix)
    return _inverse(model.base_score + model.config.learning_rate * total, model.config)


def predict(model: GBMModel, features) -> float:
    vector = np.asarray(features, dtype=float)
    if vector.ndim != 1:
        raise PredictionError(f"Expected a single feature vector, got shape {vector.shape}")
    return float(predict_many(model, vector.reshape(1, -1))[0])
