#!/usr/bin/env python3
"""Time the group fairness fast path on a large random sample set."""

import argparse
import sys
import time

import numpy as np
from dotenv import load_dotenv

from valuation.services.fairness import (
    FairnessConfig,
    deviation_weighted_fairness,
    group_fairness_bruteforce,
    group_fairness_fast,
    partition_groups,
    ratio_samples,
)

# Load environment variables from .env.local
load_dotenv(".env.local")


def random_samples(size: int, seed: int):
    """
    Draw a lognormal market with mildly regressive assessments.

    Args:
        size: Number of sold properties
        seed: Random generator seed

    Returns:
        List of ratio samples over the drawn prices
    """
    rng = np.random.default_rng(seed)
    prices = rng.lognormal(12.2, 0.6, size=size)
    mean_price = float(np.exp(np.mean(np.log(prices))))
    assessed = mean_price**0.3 * prices**0.7 * rng.lognormal(0.0, 0.1, size=size)
    return ratio_samples(prices, assessed)


def main():
    """CLI entrypoint for the fairness timing run."""
    parser = argparse.ArgumentParser(
        description="Time F_grp on a large sample and optionally compare with the O(m^2) oracle"
    )
    parser.add_argument(
        "--samples",
        type=int,
        default=100_000,
        help="Number of samples (default: 100000)",
    )
    parser.add_argument(
        "--groups",
        type=int,
        default=3,
        help="Number of sale-price groups (default: 3)",
    )
    parser.add_argument(
        "--alpha",
        type=float,
        default=2.0,
        help="F_dev decay (default: 2.0)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Random seed (default: 0)",
    )
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="Also run the brute-force oracle (slow above a few thousand samples)",
    )

    args = parser.parse_args()

    try:
        fairness = FairnessConfig(n=args.groups, alpha=args.alpha)
        samples = random_samples(args.samples, args.seed)
        partition = partition_groups(samples, fairness.n)

        started = time.perf_counter()
        fast = group_fairness_fast(samples, partition)
        elapsed = time.perf_counter() - started

        print(f"\nSamples: {args.samples}  Groups: {args.groups}  Sizes: {partition.group_sizes}")
        print(f"F_grp (fast):  {fast:.10g}  in {elapsed:.3f}s")
        print(f"F_dev (alpha={fairness.alpha:g}): {deviation_weighted_fairness(samples, fairness.alpha):.10g}")

        if args.oracle:
            started = time.perf_counter()
            reference = group_fairness_bruteforce(samples, partition)
            elapsed = time.perf_counter() - started
            print(f"F_grp (oracle): {reference:.10g}  in {elapsed:.3f}s")
            print(f"Difference: {abs(fast - reference):.3g}")

    except Exception as e:
        print(f"\nError: {e}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
