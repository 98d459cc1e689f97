from pathlib import Path

import pytest

from valuation.runtime import PRESETS, GBMConfig, SmoothingMethod
from valuation.schemas import (
    ConfigError,
    FairnessBlock,
    GroupFairnessEntry,
    ParetoMetric,
    load_experiment_config,
    parse_experiment_config,
)
from valuation.tests.helpers import write_config

SYNTHETIC = {"synthetic": {"num_properties": 100}}


def _parse(**blocks):
    return parse_experiment_config({**SYNTHETIC, **blocks})


def test_defaults_give_baseline_only_experiment() -> None:
    config = _parse()

    assert [variant.name for variant in config.variants()] == ["original"]
    assert config.baseline_name == "original"
    assert config.metrics.n_values == [2, 3]
    assert config.metrics.alpha_values == [0.0, 1.0, 2.0, 5.0]
    assert [metric.label for metric in config.report.pareto_metrics] == ["F_grp(n=2)", "F_dev(alpha=2)"]


def test_invalid_eta_reports_its_key_path() -> None:
    with pytest.raises(ConfigError) as excinfo:
        _parse(models=[{"name": "bad", "eta": "not-a-list"}])

    assert excinfo.value.key_path == "models.0.eta"


def test_nested_learner_field_reports_its_key_path() -> None:
    with pytest.raises(ConfigError) as excinfo:
        _parse(gbm={"num_trees": -1})

    assert excinfo.value.key_path == "gbm.num_trees"


def test_data_and_synthetic_are_exclusive() -> None:
    with pytest.raises(ConfigError, match="exactly one"):
        parse_experiment_config({**SYNTHETIC, "data": {"path": "roll.csv"}})
    with pytest.raises(ConfigError, match="exactly one"):
        parse_experiment_config({})


def test_k_must_match_thresholds() -> None:
    with pytest.raises(ConfigError) as excinfo:
        _parse(models=[{"name": "k4", "K": 4, "eta": [0.0, 0.5, 1.0]}])

    assert excinfo.value.key_path == "models.0"
    assert "does not match" in str(excinfo.value)


def test_unknown_fields_are_rejected() -> None:
    with pytest.raises(ConfigError) as excinfo:
        _parse(models=[{"name": "x", "params": {"n_estimators": 10}}])
    assert excinfo.value.key_path == "models.0.params"

    with pytest.raises(ConfigError) as excinfo:
        _parse(plots={"enabled": True})
    assert excinfo.value.key_path == "plots"

    with pytest.raises(ConfigError):
        _parse(models=[{"name": "x", "preset": "k9-default"}])


def test_k_without_eta_falls_back_to_default_preset() -> None:
    config = _parse(models=[{"name": "q-5", "K": 5, "smoothing": {"method": "quantile"}}])
    variant = config.models[0]

    assert variant.scheme().eta == PRESETS["k5-default"].eta
    spec = variant.smoothing_spec()
    assert spec.method is SmoothingMethod.QUANTILE
    assert spec.lam == PRESETS["k5-default"].lam
    assert spec.gamma == PRESETS["k5-default"].gamma


def test_interior_thresholds_gain_endpoints() -> None:
    variant = _parse(models=[{"name": "ds", "eta": [0.3, 0.6], "smoothing": {"method": "distance_score", "mu": 4}}])
    model = variant.models[0]

    assert model.scheme().eta == (0.0, 0.3, 0.6, 1.0)
    assert model.smoothing_spec().mu == 4.0


def test_explicit_quantile_parameters_are_cross_checked() -> None:
    with pytest.raises(ConfigError, match="overlap"):
        _parse(
            models=[
                {
                    "name": "q",
                    "eta": [0.1, 0.9],
                    "smoothing": {"method": "quantile", "lambda": [0.1, 0.5], "gamma": [0.5, 1.0]},
                }
            ]
        )


def test_duplicate_names_and_empty_roster_are_rejected() -> None:
    with pytest.raises(ConfigError, match="duplicate"):
        _parse(models=[{"name": "original"}])
    with pytest.raises(ConfigError, match="no models"):
        _parse(baseline={"enabled": False})


def test_pareto_group_metric_needs_integer_count() -> None:
    with pytest.raises(ConfigError):
        _parse(report={"pareto_metrics": [{"kind": "grp", "param": 2.5}]})
    assert ParetoMetric(kind="dev", param=0.5).label == "F_dev(alpha=0.5)"


def test_variant_params_override_shared_learner() -> None:
    config = _parse(gbm={"num_trees": 40}, models=[{"name": "deep", "params": {"max_depth": 5}}])

    tuned = config.models[0].gbm_config(config.gbm)

    assert tuned == GBMConfig(num_trees=40, max_depth=5)


def test_load_applies_seed_and_out_overrides(tmp_path: Path) -> None:
    path = write_config(tmp_path / "experiment.json", SYNTHETIC)

    config = load_experiment_config(path, seed=7, out_dir=str(tmp_path / "out"))

    assert config.gbm.seed == 7
    assert config.synthetic.seed == 7
    assert config.report.out_dir == str(tmp_path / "out")


def test_unreadable_config_files(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="does not exist"):
        load_experiment_config(tmp_path / "absent.json")

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_experiment_config(broken)


def test_fairness_block_lookup() -> None:
    block = FairnessBlock(split="test", samples=10, grp=[GroupFairnessEntry(n=2, value=-0.3)])

    assert block.value_of("grp", 2) == -0.3
    assert block.value_of("dev", 2.0) is None


def test_shipped_configs_parse() -> None:
    configs = sorted((Path(__file__).resolve().parents[2] / "configs").glob("*.json"))

    assert configs
    for path in configs:
        config = load_experiment_config(path)
        assert config.variants()
    roster = load_experiment_config(configs[-1])
    assert len(roster.variants()) == 9
