"""End-to-end experiment: data, splits, tuning, every model variant, metrics and reports.

Each model is fit on the train split for train/test scoring and refit on all
of ``training_data`` to assess the held-out assessment periods.
"""

from __future__ import annotations

import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence

import numpy as np

from ..config import get_settings
from ..dataset.records import PropertyRecord, sale_prices
from ..dataset.splits import SplitResult, make_splits, partition_assessment
from ..dataset.synthetic import generate_synthetic
from ..repositories.csv_repo import load_csv
from ..repositories.model_store import ModelStore
from ..repositories.report_repo import ReportRepository
from ..runtime.gbm import GBMConfig
from ..runtime.ksegment import KSegmentModel, assess_many, prior_quantiles, train_ksegment
from ..runtime.scoring import VarianceError, r_squared
from ..runtime.segmentation import weight_curves
from ..runtime.tuning import tune
from ..schemas import (
    AccuracyBlock,
    DeviationFairnessEntry,
    EvaluationReport,
    ExperimentConfig,
    FairnessBlock,
    GroupFairnessEntry,
    ModelMetadata,
    ModelVariant,
    TrendRow,
)
from .fairness import (
    DegenerateScoreError,
    RatioSample,
    deviation_weighted_fairness,
    group_fairness,
    relative_unfairness,
    sta_ratios,
)
from .pareto import ParetoPoint, pareto_frontier
from .trends import trend_bins, trend_spread

logger = logging.getLogger(__name__)


class StageError(RuntimeError):
    """A pipeline stage failed; the original exception is chained."""

    def __init__(self, stage: str, error: BaseException):
        super().__init__(f"Stage '{stage}' failed: {error}")
        self.stage = stage
        self.error = error


@contextmanager
def _stage(name: str) -> Iterator[None]:
    logger.info("Stage %s", name)
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


@dataclass(frozen=True)
class PreparedData:
    records: tuple[PropertyRecord, ...]
    training_data: tuple[PropertyRecord, ...]
    assessment_data: tuple[PropertyRecord, ...]
    split: SplitResult

    def sold(self, split_name: str) -> tuple[PropertyRecord, ...]:
        if split_name == "train":
            return self.split.train
        if split_name == "test":
            return self.split.test
        return tuple(record for record in self.assessment_data if record.is_sold)


@dataclass
class VariantResult:
    variant: ModelVariant
    gbm: GBMConfig
    fit_model: KSegmentModel
    full_model: KSegmentModel
    report: EvaluationReport
    samples: list[RatioSample] = field(default_factory=list)
    evaluated_ids: tuple[str, ...] = ()


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    out_dir: Path
    results: list[VariantResult]
    pareto_rows: list[dict]

    def report(self, model: str) -> EvaluationReport:
        for result in self.results:
            if result.report.model == model:
                return result.report
        raise KeyError(model)


# ==== Shared helpers (also used by the CLI) ====


def output_dir(config: ExperimentConfig) -> Path:
    return Path(config.report.out_dir or get_settings().output_dir)


def load_records(config: ExperimentConfig) -> list[PropertyRecord]:
    if config.synthetic is not None:
        return generate_synthetic(config.synthetic)
    return load_csv(config.data.path, config.data.columns)


def prepare_data(config: ExperimentConfig) -> PreparedData:
    with _stage("load"):
        records = load_records(config)
    with _stage("split"):
        training_data, assessment_data = partition_assessment(records, config.splits.assessment_periods)
        split = make_splits(training_data, config.splits.split_spec())
    logger.info(
        "Data: %d records, %d training (%d train / %d test, %d folds), %d assessment",
        len(records),
        len(training_data),
        len(split.train),
        len(split.test),
        len(split.folds),
        len(assessment_data),
    )
    return PreparedData(
        records=tuple(records),
        training_data=tuple(training_data),
        assessment_data=tuple(assessment_data),
        split=split,
    )


def tuned_config(config: ExperimentConfig, data: PreparedData) -> GBMConfig:
    with _stage("tune"):
        return tune(data.split.folds, config.gbm)


def fit_variant(
    variant: ModelVariant, gbm: GBMConfig, records: Sequence[PropertyRecord]
) -> KSegmentModel:
    return train_ksegment(records, variant.scheme(), variant.smoothing_spec(), gbm)


def _score(predictions: np.ndarray, truths: np.ndarray, scale: str, label: str) -> Optional[float]:
    if truths.size < 2:
        logger.warning("R^2 on %s skipped: %d sold records", label, truths.size)
        return None
    if scale == "log":
        predictions, truths = np.log(predictions), np.log(truths)
    try:
        return r_squared(predictions, truths)
    except VarianceError as exc:
        logger.warning("R^2 on %s skipped: %s", label, exc)
        return None


def _fairness_block(
    config: ExperimentConfig, samples: list[RatioSample], split_name: str, label: str
) -> FairnessBlock:
    metrics = config.metrics
    grp = []
    for n in metrics.n_values:
        if len(samples) < n:
            logger.warning("F_grp(n=%d) on %s skipped: %d sold records", n, label, len(samples))
            continue
        grp.append(GroupFairnessEntry(n=n, value=group_fairness(samples, n)))
    if samples:
        dev = [
            DeviationFairnessEntry(alpha=alpha, value=deviation_weighted_fairness(samples, alpha))
            for alpha in metrics.alpha_values
        ]
    else:
        logger.warning("F_dev on %s skipped: no sold records", label)
        dev = []
    return FairnessBlock(split=split_name, samples=len(samples), baseline=config.baseline_name, grp=grp, dev=dev)


def _relative(value: float, baseline_value: Optional[float], label: str) -> Optional[float]:
    if baseline_value is None:
        return None
    try:
        return relative_unfairness(value, baseline_value)
    except DegenerateScoreError as exc:
        logger.warning("%s: %s", label, exc)
        return None


def apply_relative_unfairness(reports: Sequence[EvaluationReport], baseline: Optional[str]) -> None:
    """Fill the RU of every fairness entry against the baseline's raw score of the same metric."""
    if baseline is None:
        return
    reference = next((report for report in reports if report.model == baseline), None)
    if reference is None:
        return
    for report in reports:
        for entry in report.fairness.grp:
            entry.ru = _relative(entry.value, reference.fairness.value_of("grp", entry.n), f"RU F_grp(n={entry.n})")
        for entry in report.fairness.dev:
            entry.ru = _relative(
                entry.value, reference.fairness.value_of("dev", entry.alpha), f"RU F_dev(alpha={entry.alpha:g})"
            )


def pareto_rows(config: ExperimentConfig, reports: Sequence[EvaluationReport]) -> list[dict]:
    """One row per (model, metric) with frontier and hull membership computed per metric."""
    rows = []
    split_name = config.report.pareto_split
    for metric in config.report.pareto_metrics:
        points = []
        for report in reports:
            accuracy = report.r2.on(split_name)
            fairness = report.fairness.value_of(metric.kind, int(metric.param) if metric.kind == "grp" else metric.param)
            if accuracy is None or fairness is None:
                logger.warning("Pareto skips %s for %s: missing accuracy or fairness", report.model, metric.label)
                continue
            points.append(ParetoPoint(model=report.model, accuracy=accuracy, fairness=fairness, metric=metric.label))
        frontier, hull = pareto_frontier(points)
        on_frontier = {point.model for point in frontier}
        # coincident points share hull membership
        on_hull = {(point.accuracy, point.fairness) for point in hull}
        for point in points:
            rows.append(
                {
                    "model": point.model,
                    "accuracy": point.accuracy,
                    "fairness_metric": point.metric,
                    "fairness_value": point.fairness,
                    "on_frontier": point.model in on_frontier,
                    "on_hull": (point.accuracy, point.fairness) in on_hull,
                }
            )
    return rows


def _metadata(config: ExperimentConfig, model: KSegmentModel, gbm: GBMConfig) -> ModelMetadata:
    return ModelMetadata(
        K=model.K,
        eta=list(model.scheme.eta),
        smoothing=model.spec.model_dump(mode="json", by_alias=True),
        gbm=gbm.model_dump(mode="json"),
        seeds={
            "synthetic": config.synthetic.seed if config.synthetic is not None else None,
            "gbm": gbm.seed,
        },
        segment_counts=list(model.segment_counts),
    )


def evaluate_variant(
    config: ExperimentConfig, data: PreparedData, variant: ModelVariant, tuned: GBMConfig
) -> VariantResult:
    scale = config.report.r2_scale
    gbm = variant.gbm_config(tuned)
    with _stage(f"train:{variant.name}"):
        fit_model = fit_variant(variant, gbm, data.split.train)
        full_model = fit_variant(variant, gbm, data.training_data)

    with _stage(f"evaluate:{variant.name}"):
        def scored(model: KSegmentModel, split_name: str) -> Optional[float]:
            records = data.sold(split_name)
            if not records:
                logger.warning("R^2 on %s skipped: no sold records", split_name)
                return None
            return _score(assess_many(model, records), sale_prices(records), scale, f"{variant.name}/{split_name}")

        accuracy = AccuracyBlock(
            scale=scale,
            train=scored(fit_model, "train"),
            test=scored(fit_model, "test"),
            assessment=scored(full_model, "assessment"),
        )

        split_name = config.metrics.fairness_split
        fairness_model = full_model if split_name == "assessment" else fit_model
        evaluated = data.sold(split_name)
        samples = sta_ratios(evaluated, fairness_model)
        fairness = _fairness_block(config, samples, split_name, f"{variant.name}/{split_name}")
        bins = trend_bins(samples, config.report.num_bins, config.report.log_range) if samples else []
        trend = [
            TrendRow(bin_center_logprice=b.bin_center_logprice, median_ratio=b.median_ratio, count=b.count)
            for b in bins
        ]

    report = EvaluationReport(
        model=variant.name,
        metadata=_metadata(config, full_model, gbm),
        r2=accuracy,
        fairness=fairness,
        trend=trend,
        trend_spread=trend_spread(bins, config.report.trend_min_count) if bins else None,
    )
    logger.info(
        "Model %s: R^2 train=%s test=%s assessment=%s", variant.name, accuracy.train, accuracy.test, accuracy.assessment
    )
    return VariantResult(
        variant=variant,
        gbm=gbm,
        fit_model=fit_model,
        full_model=full_model,
        report=report,
        samples=samples,
        evaluated_ids=tuple(record.id for record in evaluated),
    )


def assessment_rows(name: str, model: KSegmentModel, records: Sequence[PropertyRecord]) -> list[dict]:
    values = assess_many(model, records)
    quantiles = prior_quantiles(model, records)
    return [
        {
            "model": name,
            "record_id": record.id,
            "prior_quantile": float(q),
            "assessment": float(v),
            "sale_price": record.sale_price,
        }
        for record, q, v in zip(records, quantiles, values)
    ]


def _trend_rows(results: Sequence[VariantResult]) -> list[dict]:
    return [
        {"model": result.report.model, **row.model_dump()}
        for result in results
        for row in result.report.trend
    ]


def _price_level_rows(results: Sequence[VariantResult], baseline: Optional[str]) -> list[dict]:
    reference = next((result for result in results if result.report.model == baseline), None)
    if reference is None:
        return []
    rows = []
    for result in results:
        if result is reference:
            continue
        for record_id, base, sample in zip(result.evaluated_ids, reference.samples, result.samples):
            rows.append(
                {
                    "model": result.report.model,
                    "record_id": record_id,
                    "sale_price": sample.sale_price,
                    "baseline_assessment": base.assessed_value,
                    "model_assessment": sample.assessed_value,
                }
            )
    return rows


def _weight_rows(results: Sequence[VariantResult], num_points: int) -> list[dict]:
    rows = []
    for result in results:
        grid, matrix = weight_curves(result.full_model.scheme, result.full_model.spec, num_points)
        for y, row in zip(grid, matrix):
            for k, weight in enumerate(row, start=1):
                rows.append({"model": result.report.model, "y": float(y), "segment": k, "weight": float(weight)})
    return rows


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every configured model and write reports, models and plot-ready tables."""
    out_dir = output_dir(config)
    data = prepare_data(config)
    tuned = tuned_config(config, data)

    results = [evaluate_variant(config, data, variant, tuned) for variant in config.variants()]
    reports = [result.report for result in results]

    with _stage("fairness"):
        apply_relative_unfairness(reports, config.baseline_name)
    with _stage("pareto"):
        rows = pareto_rows(config, reports) if len(reports) > 1 else []

    with _stage("write"):
        repository = ReportRepository(out_dir, digits=get_settings().report_digits)
        store = ModelStore(out_dir)
        for result in results:
            repository.write_report(result.report)
            store.save(result.report.model, result.full_model)
        repository.write_summary(config.name, [report.model for report in reports], config.baseline_name)
        repository.write_pareto(rows)
        repository.write_trend(_trend_rows(results))
        repository.write_price_levels(_price_level_rows(results, config.baseline_name))
        repository.write_weights(_weight_rows(results, config.report.weight_grid))

    logger.info("Experiment %s finished: %d models written to %s", config.name, len(results), out_dir)
    return ExperimentResult(config=config, out_dir=out_dir, results=results, pareto_rows=rows)


def fairness_direction(value: float) -> str:
    """Human-readable reading of an RU value."""
    if math.isclose(value, 1.0):
        return "as fair as baseline"
    return "fairer than baseline" if value < 1 else "less fair than baseline"
