"""Learners, segmentation rules and the K-segment ensemble."""

from .baselines import constant_model, mean_model
from .gbm import GBMConfig, GBMModel, PredictionError, TrainingError, TreeLeaf, TreeSplit, fit, predict, predict_many
from .ksegment import KSegmentModel, assess, assess_many, prior_quantiles, train_ksegment
from .presets import PRESETS, PresetError, SchemePreset, default_roster, get_preset, variant_name
from .scoring import VarianceError, r_squared
from .segmentation import (
    DomainError,
    SegmentationScheme,
    SmoothingMethod,
    SmoothingSpec,
    WeightVector,
    assign_segment,
    assign_segments,
    distance_scores,
    midpoint_scores,
    sigmoid_blend,
    validate_smoothing,
    weight_curves,
    weight_matrix,
    weights,
)
from .tuning import SEARCH_SPACE, cross_validated_r2, sample_configs, tune

__all__ = [
    # Base learner
    "GBMConfig",
    "GBMModel",
    "TreeLeaf",
    "TreeSplit",
    "TrainingError",
    "PredictionError",
    "fit",
    "predict",
    "predict_many",
    "constant_model",
    "mean_model",
    # Scoring and tuning
    "VarianceError",
    "r_squared",
    "SEARCH_SPACE",
    "sample_configs",
    "cross_validated_r2",
    "tune",
    # Segmentation
    "DomainError",
    "SegmentationScheme",
    "SmoothingMethod",
    "SmoothingSpec",
    "WeightVector",
    "assign_segment",
    "assign_segments",
    "sigmoid_blend",
    "midpoint_scores",
    "distance_scores",
    "weights",
    "weight_matrix",
    "weight_curves",
    "validate_smoothing",
    # Presets
    "PRESETS",
    "PresetError",
    "SchemePreset",
    "get_preset",
    "variant_name",
    "default_roster",
    # Ensemble
    "KSegmentModel",
    "train_ksegment",
    "assess",
    "assess_many",
    "prior_quantiles",
]
