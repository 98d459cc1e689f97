import math

import numpy as np

from valuation.dataset import SyntheticMarketConfig, generate_synthetic, prior_assessments, sale_prices


def test_same_seed_gives_identical_markets() -> None:
    config = SyntheticMarketConfig(num_properties=300, seed=5)

    assert generate_synthetic(config) == generate_synthetic(config)


def test_different_seed_changes_market() -> None:
    first = generate_synthetic(SyntheticMarketConfig(num_properties=50, seed=1))
    second = generate_synthetic(SyntheticMarketConfig(num_properties=50, seed=2))

    assert first != second


def test_no_compression_and_no_noise_gives_exact_priors() -> None:
    records = generate_synthetic(
        SyntheticMarketConfig(num_properties=200, regressivity_strength=0.0, noise_scale=0.0, seed=4)
    )

    assert all(record.prior_assessment == record.sale_price for record in records)


def test_full_compression_collapses_priors_to_geometric_mean() -> None:
    records = generate_synthetic(
        SyntheticMarketConfig(num_properties=200, regressivity_strength=1.0, noise_scale=0.0, seed=4)
    )

    priors = prior_assessments(records)
    geometric_mean = math.exp(float(np.mean(np.log(sale_prices(records)))))
    assert np.all(priors == priors[0])
    assert math.isclose(priors[0], geometric_mean, rel_tol=1e-9)


def test_injected_regressivity_is_detectable() -> None:
    records = generate_synthetic(SyntheticMarketConfig(num_properties=2000, regressivity_strength=0.4, seed=9))

    prices = sale_prices(records)
    ratio = prior_assessments(records) / prices
    assert np.corrcoef(ratio, prices)[0, 1] < 0


def test_unsold_rows_only_in_last_period() -> None:
    config = SyntheticMarketConfig(num_properties=1000, num_periods=6, unsold_fraction=0.5, seed=3)
    records = generate_synthetic(config)

    unsold = [record for record in records if not record.is_sold]
    last = config.start_period + config.num_periods - 1
    assert unsold
    assert all(record.sale_date == last for record in unsold)
    assert {record.sale_date for record in records} <= set(range(config.start_period, last + 1))


def test_features_have_declared_dimension() -> None:
    records = generate_synthetic(SyntheticMarketConfig(num_properties=10, feature_dim=4))

    assert all(len(record.features) == 4 for record in records)
    assert records[0].id == "P000000"
