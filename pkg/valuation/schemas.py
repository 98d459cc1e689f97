"""Pydantic schemas for the experiment config file and the evaluation report documents."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .dataset.columns import ColumnSchema
from .dataset.splits import SplitSpec
from .dataset.synthetic import SyntheticMarketConfig
from .runtime.gbm import GBMConfig
from .runtime.presets import PRESETS, get_preset
from .runtime.segmentation import (
    SegmentationScheme,
    SmoothingMethod,
    SmoothingSpec,
    validate_smoothing,
)

SplitName = Literal["train", "test", "assessment"]


class ConfigError(ValueError):
    """Raised for an invalid experiment config; ``key_path`` is the dotted location."""

    def __init__(self, key_path: str, message: str):
        super().__init__(f"{key_path}: {message}" if key_path else message)
        self.key_path = key_path


# ==================== Experiment Config Schemas ====================


class DataBlock(BaseModel):
    path: str
    columns: ColumnSchema = Field(default_factory=ColumnSchema)


class SplitsBlock(SplitSpec):
    assessment_periods: int = Field(default=1, ge=1)

    def split_spec(self) -> SplitSpec:
        return SplitSpec(train_fraction=self.train_fraction, validation_windows=self.validation_windows)


class SmoothingBlock(BaseModel):
    """Smoothing as written in the config; unset parameters come from the preset."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    method: SmoothingMethod = SmoothingMethod.UNSMOOTHED
    lam: Optional[list[float]] = Field(default=None, alias="lambda")
    gamma: Optional[list[float]] = None
    mu: Optional[float] = Field(default=None, gt=0.0)


class ModelVariant(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(min_length=1)
    K: Optional[int] = Field(default=None, ge=1)
    preset: Optional[str] = None
    eta: Optional[list[float]] = None
    smoothing: SmoothingBlock = Field(default_factory=SmoothingBlock)
    params: dict[str, Any] = Field(default_factory=dict)

    @field_validator("preset")
    @classmethod
    def _known_preset(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in PRESETS:
            raise ValueError(f"unknown preset {value!r}; choose one of {sorted(PRESETS)}")
        return value

    @field_validator("params")
    @classmethod
    def _known_params(cls, value: dict[str, Any]) -> dict[str, Any]:
        unknown = sorted(set(value) - set(GBMConfig.model_fields))
        if unknown:
            raise ValueError(f"unknown learner parameters {unknown}")
        return value

    @model_validator(mode="after")
    def _resolves(self) -> "ModelVariant":
        try:
            scheme = self.scheme()
            spec = self.smoothing_spec()
        except ValidationError as exc:
            raise ValueError(exc.errors()[0]["msg"]) from None
        if self.K is not None and self.K != scheme.K:
            raise ValueError(f"K={self.K} does not match {scheme.K} segments in eta {list(scheme.eta)}")
        validate_smoothing(scheme, spec)
        return self

    def _preset_name(self) -> Optional[str]:
        if self.preset is not None:
            return self.preset
        if self.eta is None and self.K is not None and f"k{self.K}-default" in PRESETS:
            return f"k{self.K}-default"
        return None

    def scheme(self) -> SegmentationScheme:
        if self.eta is not None:
            eta = list(self.eta)
            # interior thresholds are accepted without the fixed endpoints
            if not eta or eta[0] != 0.0:
                eta = [0.0, *eta]
            if eta[-1] != 1.0:
                eta = [*eta, 1.0]
            return SegmentationScheme(eta=tuple(eta))
        preset = self._preset_name()
        if preset is not None:
            return get_preset(preset).scheme
        if self.K in (None, 1):
            return SegmentationScheme(eta=(0.0, 1.0))
        raise ValueError(f"K={self.K} needs explicit eta thresholds or a preset")

    def smoothing_spec(self) -> SmoothingSpec:
        block = self.smoothing
        preset_name = self._preset_name()
        preset = get_preset(preset_name) if preset_name else None
        mu = block.mu if block.mu is not None else (preset.mu if preset else 10.0)
        if block.method is not SmoothingMethod.QUANTILE:
            return SmoothingSpec(method=block.method, mu=mu)
        lam = block.lam if block.lam is not None else (list(preset.lam) if preset else [])
        gamma = block.gamma if block.gamma is not None else (list(preset.gamma) if preset else [])
        return SmoothingSpec(method=block.method, lam=tuple(lam), gamma=tuple(gamma), mu=mu)

    def gbm_config(self, tuned: GBMConfig) -> GBMConfig:
        return GBMConfig.model_validate({**tuned.model_dump(), **self.params})


class BaselineBlock(BaseModel):
    """The original single model (K=1) every variant is compared against."""

    name: str = "original"
    enabled: bool = True

    def variant(self) -> ModelVariant:
        return ModelVariant(name=self.name, K=1)


class MetricsBlock(BaseModel):
    n_values: list[int] = Field(default_factory=lambda: [2, 3])
    alpha_values: list[float] = Field(default_factory=lambda: [0.0, 1.0, 2.0, 5.0])
    fairness_split: SplitName = "test"

    @field_validator("n_values")
    @classmethod
    def _group_counts(cls, value: list[int]) -> list[int]:
        if any(n < 2 for n in value):
            raise ValueError(f"group counts must be at least 2, got {value}")
        return value

    @field_validator("alpha_values")
    @classmethod
    def _alphas(cls, value: list[float]) -> list[float]:
        if any(alpha < 0 for alpha in value):
            raise ValueError(f"alpha values must be nonnegative, got {value}")
        return value


class ParetoMetric(BaseModel):
    kind: Literal["grp", "dev"]
    param: float

    @property
    def label(self) -> str:
        if self.kind == "grp":
            return f"F_grp(n={int(self.param)})"
        return f"F_dev(alpha={self.param:g})"


class ReportBlock(BaseModel):
    out_dir: Optional[str] = None
    log_range: tuple[float, float] = (9.0, 16.0)
    num_bins: int = Field(default=14, ge=2)
    trend_min_count: int = Field(default=1, ge=1)
    r2_scale: Literal["raw", "log"] = "raw"
    pareto_split: SplitName = "assessment"
    pareto_metrics: list[ParetoMetric] = Field(
        default_factory=lambda: [ParetoMetric(kind="grp", param=2), ParetoMetric(kind="dev", param=2.0)]
    )
    weight_grid: int = Field(default=101, ge=2)

    @field_validator("log_range")
    @classmethod
    def _ordered_range(cls, value: tuple[float, float]) -> tuple[float, float]:
        if not value[0] < value[1]:
            raise ValueError(f"log_range must satisfy lo < hi, got {value}")
        return value


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    data: Optional[DataBlock] = None
    synthetic: Optional[SyntheticMarketConfig] = None
    splits: SplitsBlock = Field(default_factory=SplitsBlock)
    gbm: GBMConfig = Field(default_factory=GBMConfig)
    baseline: BaselineBlock = Field(default_factory=BaselineBlock)
    models: list[ModelVariant] = Field(default_factory=list)
    metrics: MetricsBlock = Field(default_factory=MetricsBlock)
    report: ReportBlock = Field(default_factory=ReportBlock)

    @model_validator(mode="after")
    def _check_experiment(self) -> "ExperimentConfig":
        if (self.data is None) == (self.synthetic is None):
            raise ValueError("exactly one of 'data' or 'synthetic' must be given")
        names = [variant.name for variant in self.variants()]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ValueError(f"duplicate model names {duplicates}")
        if not names:
            raise ValueError("no models configured and the baseline is disabled")
        for metric in self.report.pareto_metrics:
            if metric.kind == "grp" and (metric.param < 2 or metric.param != int(metric.param)):
                raise ValueError(f"pareto group count must be an integer >= 2, got {metric.param}")
        return self

    def variants(self) -> list[ModelVariant]:
        """Baseline first, then configured models in file order."""
        head = [self.baseline.variant()] if self.baseline.enabled else []
        return head + list(self.models)

    @property
    def baseline_name(self) -> Optional[str]:
        return self.baseline.name if self.baseline.enabled else None

    def with_overrides(self, *, seed: Optional[int] = None, out_dir: Optional[str] = None) -> "ExperimentConfig":
        update: dict[str, Any] = {}
        if seed is not None:
            update["gbm"] = self.gbm.model_copy(update={"seed": seed})
            if self.synthetic is not None:
                update["synthetic"] = self.synthetic.model_copy(update={"seed": seed})
        if out_dir is not None:
            update["report"] = self.report.model_copy(update={"out_dir": out_dir})
        return self.model_copy(update=update)


def _key_path(loc: tuple[Any, ...]) -> str:
    return ".".join(str(part) for part in loc)


def parse_experiment_config(document: Any) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(document)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(_key_path(first["loc"]), first["msg"]) from exc


def load_experiment_config(
    path: str | Path, *, seed: Optional[int] = None, out_dir: Optional[str] = None
) -> ExperimentConfig:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError("", f"config file {path} does not exist") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"config file {path} is not valid JSON: {exc}") from exc
    return parse_experiment_config(document).with_overrides(seed=seed, out_dir=out_dir)


# ==================== Evaluation Report Schemas ====================


class AccuracyBlock(BaseModel):
    scale: Literal["raw", "log"] = "raw"
    train: Optional[float] = None
    test: Optional[float] = None
    assessment: Optional[float] = None

    def on(self, split: str) -> Optional[float]:
        return getattr(self, split)


class GroupFairnessEntry(BaseModel):
    n: int
    value: float
    ru: Optional[float] = None


class DeviationFairnessEntry(BaseModel):
    alpha: float
    value: float
    ru: Optional[float] = None


class FairnessBlock(BaseModel):
    split: SplitName
    samples: int
    baseline: Optional[str] = None
    grp: list[GroupFairnessEntry] = Field(default_factory=list)
    dev: list[DeviationFairnessEntry] = Field(default_factory=list)

    def value_of(self, kind: str, param: float) -> Optional[float]:
        entries = self.grp if kind == "grp" else self.dev
        for entry in entries:
            if (entry.n if kind == "grp" else entry.alpha) == param:
                return entry.value
        return None


class TrendRow(BaseModel):
    bin_center_logprice: float
    median_ratio: Optional[float] = None
    count: int


class ModelMetadata(BaseModel):
    K: int
    eta: list[float]
    smoothing: dict[str, Any]
    gbm: dict[str, Any]
    seeds: dict[str, Optional[int]]
    segment_counts: list[int] = Field(default_factory=list)


class EvaluationReport(BaseModel):
    model: str
    metadata: ModelMetadata
    r2: AccuracyBlock
    fairness: FairnessBlock
    trend: list[TrendRow] = Field(default_factory=list)
    trend_spread: Optional[float] = None
