#!/usr/bin/env python3
"""Command-line entry point: ``ksegment <command> --config run.json [--seed N] [--out DIR]``.

Exit codes: 0 on success, 1 for an invalid config, 2 for any runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from dotenv import load_dotenv

from .config import get_settings
from .dataset.synthetic import feature_names
from .repositories.csv_repo import write_csv
from .repositories.model_store import ModelStore
from .repositories.report_repo import ReportRepository
from .schemas import ConfigError, EvaluationReport, ExperimentConfig, load_experiment_config
from .services.experiment import (
    assessment_rows,
    fairness_direction,
    fit_variant,
    load_records,
    output_dir,
    pareto_rows,
    prepare_data,
    run_experiment,
    tuned_config,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _gen_data(config: ExperimentConfig) -> Path:
    if config.synthetic is None:
        raise ConfigError("synthetic", "gen-data needs a 'synthetic' block")
    records = load_records(config)
    path = output_dir(config) / "data.csv"
    write_csv(records, path, feature_columns=feature_names(config.synthetic.feature_dim))
    print(f"Wrote {len(records)} records to {path}")
    return path


def _train(config: ExperimentConfig) -> None:
    data = prepare_data(config)
    tuned = tuned_config(config, data)
    store = ModelStore(output_dir(config))
    for variant in config.variants():
        model = fit_variant(variant, variant.gbm_config(tuned), data.training_data)
        path = store.save(variant.name, model)
        print(f"{variant.name}: K={model.K} segments {list(model.segment_counts)} -> {path}")


def _assess(config: ExperimentConfig) -> None:
    data = prepare_data(config)
    store = ModelStore(output_dir(config))
    rows = []
    for variant in config.variants():
        rows.extend(assessment_rows(variant.name, store.load(variant.name), data.assessment_data))
    path = ReportRepository(output_dir(config), digits=get_settings().report_digits).write_assessments(rows)
    print(f"Wrote {len(rows)} assessments to {path}")


def _evaluate(config: ExperimentConfig) -> None:
    result = run_experiment(config)
    print(f"Wrote {len(result.results)} reports to {result.out_dir}")


def _pareto(config: ExperimentConfig) -> None:
    repository = ReportRepository(output_dir(config), digits=get_settings().report_digits)
    rows = pareto_rows(config, repository.read_reports())
    path = repository.write_pareto(rows)
    print(f"Wrote {len(rows)} Pareto rows to {path}")


def _format(value: Optional[float], digits: int = 4) -> str:
    return "-" if value is None else f"{value:.{digits}f}"


def _summary_lines(reports: Sequence[EvaluationReport]) -> list[str]:
    lines = [f"{'model':<12} {'K':>2} {'smoothing':<15} {'R2 test':>8} {'R2 assess':>9} {'spread':>7}  fairness"]
    for report in reports:
        fairness = []
        for entry in report.fairness.grp:
            fairness.append(f"F_grp(n={entry.n})={_format(entry.value)} RU={_format(entry.ru, 3)}")
        for entry in report.fairness.dev:
            fairness.append(f"F_dev(a={entry.alpha:g})={_format(entry.value)} RU={_format(entry.ru, 3)}")
        lines.append(
            f"{report.model:<12} {report.metadata.K:>2} {report.metadata.smoothing['method']:<15} "
            f"{_format(report.r2.test):>8} {_format(report.r2.assessment):>9} "
            f"{_format(report.trend_spread, 3):>7}  " + "; ".join(fairness)
        )
        grp_ru = next((entry.ru for entry in report.fairness.grp if entry.ru is not None), None)
        if grp_ru is not None and report.model != report.fairness.baseline:
            lines.append(f"{'':<12} group fairness: {fairness_direction(grp_ru)}")
    return lines


def _report(config: ExperimentConfig) -> None:
    reports = ReportRepository(output_dir(config)).read_reports()
    for line in _summary_lines(reports):
        print(line)


COMMANDS = {
    "gen-data": (_gen_data, "Generate a synthetic roll and write data.csv"),
    "train": (_train, "Fit every configured model on training_data and store it"),
    "assess": (_assess, "Assess the assessment set with stored models"),
    "evaluate": (_evaluate, "Run the full experiment and write all reports"),
    "pareto": (_pareto, "Rebuild pareto.csv from stored reports"),
    "report": (_report, "Print a summary table of stored reports"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ksegment", description=get_settings().app_name)
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", required=True, help="Experiment config JSON file")
        sub.add_argument("--seed", type=int, default=None, help="Override synthetic and tuning seeds")
        sub.add_argument("--out", default=None, help="Override report.out_dir")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv(".env.local")
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    handler, _ = COMMANDS[args.command]

    try:
        config = load_experiment_config(args.config, seed=args.seed, out_dir=args.out)
        handler(config)
    except ConfigError as exc:
        logger.error("Invalid config: %s", exc)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
