"""Accuracy-fairness frontier. Both coordinates are maximized."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class ParetoPoint:
    model: str
    accuracy: float
    fairness: float
    metric: str = ""


def dominates(a: ParetoPoint, b: ParetoPoint) -> bool:
    """``a`` is at least as good on both axes and strictly better on one."""
    return (
        a.accuracy >= b.accuracy
        and a.fairness >= b.fairness
        and (a.accuracy > b.accuracy or a.fairness > b.fairness)
    )


def _cross(o: ParetoPoint, a: ParetoPoint, b: ParetoPoint) -> float:
    return (a.accuracy - o.accuracy) * (b.fairness - o.fairness) - (a.fairness - o.fairness) * (b.accuracy - o.accuracy)


def pareto_frontier(points: Sequence[ParetoPoint]) -> tuple[list[ParetoPoint], list[ParetoPoint]]:
    """Non-dominated points and their upper-right convex hull, both by increasing accuracy."""
    non_dominated = [p for p in points if not any(dominates(q, p) for q in points)]
    non_dominated.sort(key=lambda p: (p.accuracy, -p.fairness, p.model))

    hull: list[ParetoPoint] = []
    for point in non_dominated:
        if hull and hull[-1].accuracy == point.accuracy and hull[-1].fairness == point.fairness:
            continue
        # pop on left turns and collinear points
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], point) >= 0:
            hull.pop()
        hull.append(point)
    return non_dominated, hull
