import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from valuation.dataset import SyntheticMarketConfig, build_quantile_index, feature_matrix, generate_synthetic, sale_prices
from valuation.runtime import (
    PRESETS,
    GBMConfig,
    KSegmentModel,
    PredictionError,
    SegmentationScheme,
    SmoothingMethod,
    SmoothingSpec,
    TrainingError,
    assess,
    assess_many,
    assign_segments,
    constant_model,
    fit,
    predict_many,
    prior_quantiles,
    train_ksegment,
)
from valuation.tests.helpers import make_record

K3 = PRESETS["k3-default"]
LEVELS = (100.0, 200.0, 300.0)


def _constant_ensemble(scheme: SegmentationScheme, spec: SmoothingSpec, levels) -> KSegmentModel:
    return KSegmentModel(
        scheme=scheme,
        spec=spec,
        submodels=tuple(constant_model(level, feature_dim=1) for level in levels),
        prior_index=build_quantile_index(range(1, 101)),
        feature_dim=1,
    )


def _at_prior(prior: float):
    return make_record(0, [0.0], prior_assessment=prior)


def test_single_segment_equals_a_plain_fit(small_market) -> None:
    config = GBMConfig(num_trees=10, max_depth=2, min_samples_leaf=10)

    model = train_ksegment(small_market, SegmentationScheme(eta=(0.0, 1.0)), SmoothingSpec(), config)

    direct = fit(feature_matrix(small_market), sale_prices(small_market), config)
    assert np.array_equal(assess_many(model, small_market), predict_many(direct, feature_matrix(small_market)))
    assert model.segment_counts == (len(small_market),)


def test_default_k3_thresholds_split_population_by_rank() -> None:
    records = generate_synthetic(SyntheticMarketConfig(num_properties=5000, seed=2))

    model = train_ksegment(records, K3.scheme, SmoothingSpec(), GBMConfig(num_trees=10))

    assert model.segment_counts == (499, 4000, 501)
    assert model.K == 3


def test_empty_segment_names_its_interval() -> None:
    records = [make_record(i, [float(i)], sale_price=100.0 + i, prior_assessment=float(i + 1)) for i in range(10)]
    scheme = SegmentationScheme(eta=(0.0, 0.55, 0.58, 1.0))

    with pytest.raises(TrainingError, match="Segment 2"):
        train_ksegment(records, scheme, SmoothingSpec(), GBMConfig(num_trees=2, min_samples_leaf=1))


def test_unsold_training_rows_are_rejected() -> None:
    records = [make_record(i, [float(i)], prior_assessment=float(i + 1)) for i in range(5)]
    records.append(make_record(9, [9.0], sale_price=None))

    with pytest.raises(TrainingError):
        train_ksegment(records, SegmentationScheme(eta=(0.0, 1.0)), SmoothingSpec(), GBMConfig(min_samples_leaf=1))


def test_distance_score_blends_both_halves() -> None:
    model = _constant_ensemble(
        SegmentationScheme(eta=(0.0, 0.5, 1.0)), SmoothingSpec(method="distance_score"), (10.0, 20.0)
    )

    expected = (math.exp(-5.0) * 10.0 + 20.0) / (1.0 + math.exp(-5.0))
    assert assess(model, _at_prior(75.0)) == pytest.approx(expected, rel=1e-12)


def test_quantile_blend_midpoint_splits_evenly() -> None:
    model = _constant_ensemble(K3.scheme, K3.smoothing("quantile"), LEVELS)

    assert assess(model, _at_prior(10.0)) == pytest.approx(150.0, rel=1e-12)
    assert assess(model, _at_prior(50.0)) == pytest.approx(200.0, rel=1e-12)


def test_unsmoothed_jumps_by_full_level_difference() -> None:
    model = _constant_ensemble(K3.scheme, SmoothingSpec(), LEVELS)

    below = assess(model, _at_prior(9.5))
    at = assess(model, _at_prior(10.0))

    assert below == 100.0
    assert at == 200.0
    assert assess(model, _at_prior(50.0)) == 200.0


def test_unsmoothed_assessment_uses_owning_submodel(small_market) -> None:
    model = train_ksegment(small_market, K3.scheme, SmoothingSpec(), GBMConfig(num_trees=5, min_samples_leaf=10))

    segments = assign_segments(model.scheme, prior_quantiles(model, small_market))
    matrix = feature_matrix(small_market)
    owned = np.asarray([predict_many(model.submodels[k - 1], matrix[i : i + 1])[0] for i, k in enumerate(segments)])
    assert np.array_equal(assess_many(model, small_market), owned)


def test_smoothed_assessment_lies_between_submodel_predictions(small_market) -> None:
    config = GBMConfig(num_trees=5, min_samples_leaf=10)
    for method in SmoothingMethod:
        model = train_ksegment(small_market, K3.scheme, K3.smoothing(method), config)
        matrix = feature_matrix(small_market)
        predictions = np.column_stack([predict_many(sub, matrix) for sub in model.submodels])

        assessed = assess_many(model, small_market)

        slack = 1e-9 * predictions.max()
        assert np.all(assessed >= predictions.min(axis=1) - slack)
        assert np.all(assessed <= predictions.max(axis=1) + slack)


@given(prior=st.floats(min_value=0.01, max_value=500.0))
def test_constant_levels_bound_every_assessment(prior: float) -> None:
    for method in SmoothingMethod:
        model = _constant_ensemble(K3.scheme, K3.smoothing(method), LEVELS)
        value = assess(model, _at_prior(prior))
        assert 100.0 - 1e-9 <= value <= 300.0 + 1e-9


def test_feature_mismatch_is_prediction_error() -> None:
    model = _constant_ensemble(K3.scheme, SmoothingSpec(), LEVELS)

    with pytest.raises(PredictionError):
        assess(model, make_record(1, [0.0, 1.0]))
    assert assess_many(model, []).shape == (0,)


def test_ensemble_checks_its_parts() -> None:
    with pytest.raises(TrainingError):
        _constant_ensemble(K3.scheme, SmoothingSpec(), (1.0, 2.0))


DENSE = 20000


def _dense_grid(scheme: SegmentationScheme, spec: SmoothingSpec) -> tuple[np.ndarray, np.ndarray]:
    """Assessments of constant submodels at ``y = i / DENSE`` for ``i = 1..DENSE``."""
    model = KSegmentModel(
        scheme=scheme,
        spec=spec,
        submodels=tuple(constant_model(100.0 * k, feature_dim=1) for k in range(1, scheme.K + 1)),
        prior_index=build_quantile_index(np.arange(1.0, DENSE + 1.0)),
        feature_dim=1,
    )
    records = [_at_prior(float(i)) for i in range(1, DENSE + 1)]
    return prior_quantiles(model, records), assess_many(model, records)


@pytest.mark.parametrize("preset", ["k3-default", "k5-default"])
@pytest.mark.parametrize("method", ["midpoint_score", "distance_score"])
def test_score_assessments_stay_continuous_across_thresholds(preset: str, method: str) -> None:
    scheme = PRESETS[preset].scheme
    ys, values = _dense_grid(scheme, SmoothingSpec(method=method))
    steps = np.abs(np.diff(values))

    for eta_k in scheme.eta[1:-1]:
        crossing = int(np.searchsorted(ys, eta_k, side="left")) - 1
        assert ys[crossing] < eta_k <= ys[crossing + 1]
        window = np.concatenate((steps[crossing - 50 : crossing], steps[crossing + 1 : crossing + 51]))
        assert steps[crossing] <= 10.0 * window.max(), eta_k


@pytest.mark.parametrize("preset", ["k3-default", "k5-default"])
def test_quantile_assessments_jump_far_less_than_unsmoothed(preset: str) -> None:
    scheme = PRESETS[preset].scheme
    _, unsmoothed = _dense_grid(scheme, SmoothingSpec())
    _, blended = _dense_grid(scheme, PRESETS[preset].smoothing("quantile"))

    assert np.abs(np.diff(unsmoothed)).max() == 100.0
    # sigma(-5) of the level gap at blend endpoints, plus one grid step of sigmoid slope
    assert np.abs(np.diff(blended)).max() <= 0.0067 * 100.0 + 0.1


def test_retraining_one_segment_leaves_other_unsmoothed_segments_alone(small_market) -> None:
    config = GBMConfig(num_trees=5, min_samples_leaf=10)
    model = train_ksegment(small_market, K3.scheme, SmoothingSpec(), config)
    segments = assign_segments(model.scheme, prior_quantiles(model, small_market))

    changed = [
        dataclasses.replace(record, sale_price=record.sale_price * 1.5) if k == 3 else record
        for record, k in zip(small_market, segments)
    ]
    retrained = train_ksegment(changed, K3.scheme, SmoothingSpec(), config)

    before = assess_many(model, small_market)
    after = assess_many(retrained, small_market)
    outside = segments != 3
    assert np.array_equal(before[outside], after[outside])
    assert not np.array_equal(before[~outside], after[~outside])
