from pathlib import Path
from typing import Any

import pytest

from valuation.dataset import PropertyRecord, SyntheticMarketConfig, generate_synthetic


@pytest.fixture
def small_market() -> list[PropertyRecord]:
    return generate_synthetic(
        SyntheticMarketConfig(num_properties=800, feature_dim=3, num_periods=8, seed=11)
    )


@pytest.fixture
def fast_gbm_settings() -> dict[str, Any]:
    return {"num_trees": 15, "learning_rate": 0.3, "max_depth": 2, "min_samples_leaf": 10}


@pytest.fixture
def experiment_document(tmp_path: Path, fast_gbm_settings: dict[str, Any]) -> dict[str, Any]:
    return {
        "name": "unit",
        "synthetic": {"num_properties": 1500, "feature_dim": 3, "num_periods": 8, "seed": 3},
        "splits": {"train_fraction": 0.9, "validation_windows": 2},
        "gbm": fast_gbm_settings,
        "models": [
            {"name": "unsm-3", "preset": "k3-default"},
            {"name": "q-3", "preset": "k3-default", "smoothing": {"method": "quantile"}},
            {"name": "ds-3", "preset": "k3-default", "smoothing": {"method": "distance_score"}},
        ],
        "report": {"out_dir": str(tmp_path / "run"), "weight_grid": 11},
    }
