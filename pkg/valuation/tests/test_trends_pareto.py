import math

import numpy as np
import pytest

from valuation.services import ParetoPoint, dominates, pareto_frontier, ratio_samples, trend_bins, trend_spread
from valuation.services.trends import TrendBin


def test_unit_ratios_give_unit_medians() -> None:
    prices = np.exp(np.linspace(9.5, 15.5, 40))

    bins = trend_bins(ratio_samples(prices, prices))

    assert len(bins) == 14
    assert sum(b.count for b in bins) == 40
    assert all(b.median_ratio == 1.0 for b in bins if b.count)


def test_samples_outside_log_range_are_dropped() -> None:
    prices = [math.exp(8.0), math.exp(10.0), math.exp(17.0)]

    bins = trend_bins(ratio_samples(prices, prices))

    assert sum(b.count for b in bins) == 1


def test_two_point_median_and_empty_bins() -> None:
    prices = [math.exp(10.1), math.exp(10.2)]

    bins = trend_bins(ratio_samples(prices, [0.8 * prices[0], 1.2 * prices[1]]), num_bins=7, log_range=(9.0, 16.0))

    assert bins[1].count == 2
    assert bins[1].median_ratio == pytest.approx(1.0, abs=1e-12)
    assert bins[1].bin_center_logprice == pytest.approx(10.5)
    assert bins[0].count == 0 and bins[0].median_ratio is None


def test_top_edge_belongs_to_last_bin() -> None:
    prices = [math.exp(16.0)]
    top = float(np.log(prices[0]))

    bins = trend_bins(ratio_samples(prices, prices), num_bins=2, log_range=(9.0, top))

    assert [b.count for b in bins] == [0, 1]


def test_invalid_binning_is_rejected() -> None:
    with pytest.raises(ValueError):
        trend_bins([], num_bins=1)
    with pytest.raises(ValueError):
        trend_bins([], log_range=(16.0, 9.0))


def test_trend_spread_skips_thin_bins() -> None:
    bins = [TrendBin(10.0, 1.3, 50), TrendBin(11.0, 1.0, 50), TrendBin(12.0, 0.2, 2), TrendBin(13.0, None, 0)]

    assert trend_spread(bins) == pytest.approx(1.1)
    assert trend_spread(bins, min_count=30) == pytest.approx(0.3)
    assert trend_spread(bins[:1]) == 0.0


def test_dominated_point_leaves_frontier() -> None:
    best, worse = ParetoPoint("a", 0.8, -0.5), ParetoPoint("b", 0.7, -0.6)

    frontier, hull = pareto_frontier([best, worse])

    assert dominates(best, worse) and not dominates(worse, best)
    assert frontier == [best]
    assert hull == [best]


def test_collinear_points_keep_only_hull_endpoints() -> None:
    points = [ParetoPoint("b", 2.0, -4.0), ParetoPoint("a", 1.0, -3.0), ParetoPoint("c", 3.0, -5.0)]

    frontier, hull = pareto_frontier(points)

    assert [p.model for p in frontier] == ["a", "b", "c"]
    assert [p.model for p in hull] == ["a", "c"]


def test_single_point_is_its_own_frontier() -> None:
    only = ParetoPoint("original", 0.5, -0.1)

    assert pareto_frontier([only]) == ([only], [only])


def _cross(o: ParetoPoint, a: ParetoPoint, b: ParetoPoint) -> float:
    return (a.accuracy - o.accuracy) * (b.fairness - o.fairness) - (a.fairness - o.fairness) * (b.accuracy - o.accuracy)


def test_frontier_and_hull_agree_with_bruteforce() -> None:
    rng = np.random.default_rng(0)
    for trial in range(1000):
        size = int(rng.integers(1, 15))
        coords = rng.integers(0, 12, size=(size, 2)).astype(float)
        points = [ParetoPoint(f"m{i}", acc, -fair) for i, (acc, fair) in enumerate(coords)]

        frontier, hull = pareto_frontier(points)

        expected = {p.model for p in points if not any(dominates(q, p) for q in points)}
        assert {p.model for p in frontier} == expected, trial
        accuracies = [p.accuracy for p in frontier]
        assert accuracies == sorted(accuracies)

        distinct = {(p.accuracy, p.fairness): p for p in reversed(frontier)}
        on_hull = set()
        for coord, p in distinct.items():
            left = [q for q in distinct.values() if q.accuracy < p.accuracy]
            right = [q for q in distinct.values() if q.accuracy > p.accuracy]
            if all(_cross(a, p, b) < 0 for a in left for b in right):
                on_hull.add(coord)
        assert {(p.accuracy, p.fairness) for p in hull} == on_hull, trial
        assert len(hull) == len(on_hull)
