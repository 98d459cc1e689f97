"""Report documents and plot-ready CSV files of one experiment directory."""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from ..schemas import EvaluationReport

logger = logging.getLogger(__name__)

PARETO_COLUMNS = ["model", "accuracy", "fairness_metric", "fairness_value", "on_frontier", "on_hull"]
TREND_COLUMNS = ["model", "bin_center_logprice", "median_ratio", "count"]
PRICE_LEVEL_COLUMNS = ["model", "record_id", "sale_price", "baseline_assessment", "model_assessment"]
WEIGHT_COLUMNS = ["model", "y", "segment", "weight"]
ASSESSMENT_COLUMNS = ["model", "record_id", "prior_quantile", "assessment", "sale_price"]


class ReportStoreError(RuntimeError):
    """Raised when stored reports are missing or unreadable."""


def round_significant(value: Any, digits: int) -> Any:
    """Round every float in a JSON-like tree to ``digits`` significant digits."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"Cannot serialize non-finite value {value!r}")
        rounded = float(f"{value:.{digits}g}")
        return rounded if rounded else 0.0
    if isinstance(value, dict):
        return {key: round_significant(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_significant(item, digits) for item in value]
    return value


class ReportRepository:
    """Files written under one experiment output directory."""

    REPORTS_DIR = "reports"
    SUMMARY_FILE = "summary.json"
    PARETO_FILE = "pareto.csv"
    TREND_FILE = "trend.csv"
    PRICE_LEVELS_FILE = "price_levels.csv"
    WEIGHTS_FILE = "weights.csv"
    ASSESSMENTS_FILE = "assessments.csv"

    def __init__(self, out_dir: str | Path, digits: int = 10):
        self.out_dir = Path(out_dir)
        self.digits = digits

    def _write_json(self, path: Path, document: Any) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        text = json.dumps(round_significant(document, self.digits), indent=2, sort_keys=True, allow_nan=False)
        path.write_text(text + "\n", encoding="utf-8")
        return path

    def _write_csv(self, name: str, columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> Path:
        path = self.out_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(list(rows), columns=list(columns))
        frame.to_csv(path, index=False, float_format=f"%.{self.digits}g", na_rep="", lineterminator="\n")
        logger.debug("Wrote %d rows to %s", len(frame), path)
        return path

    # ==== Reports ====

    def report_path(self, model: str) -> Path:
        return self.out_dir / self.REPORTS_DIR / f"{model}.json"

    def write_report(self, report: EvaluationReport) -> Path:
        return self._write_json(self.report_path(report.model), report.model_dump(mode="json"))

    def write_summary(self, experiment: str, models: Sequence[str], baseline: Optional[str]) -> Path:
        document = {"experiment": experiment, "models": list(models), "baseline": baseline}
        return self._write_json(self.out_dir / self.SUMMARY_FILE, document)

    def read_summary(self) -> dict[str, Any]:
        path = self.out_dir / self.SUMMARY_FILE
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ReportStoreError(f"No experiment summary at {path}; run 'evaluate' first") from None
        except json.JSONDecodeError as exc:
            raise ReportStoreError(f"Experiment summary {path} is not valid JSON: {exc}") from exc

    def read_reports(self) -> list[EvaluationReport]:
        """Stored reports in the order the experiment produced them."""
        reports = []
        for model in self.read_summary()["models"]:
            path = self.report_path(model)
            try:
                reports.append(EvaluationReport.model_validate_json(path.read_text(encoding="utf-8")))
            except FileNotFoundError:
                raise ReportStoreError(f"Report for model {model!r} is missing at {path}") from None
            except ValidationError as exc:
                raise ReportStoreError(f"Report {path} is malformed: {exc}") from exc
        return reports

    # ==== Plot-ready tables ====

    def write_pareto(self, rows: Iterable[dict[str, Any]]) -> Path:
        formatted = (
            {**row, "on_frontier": str(bool(row["on_frontier"])).lower(), "on_hull": str(bool(row["on_hull"])).lower()}
            for row in rows
        )
        return self._write_csv(self.PARETO_FILE, PARETO_COLUMNS, formatted)

    def write_trend(self, rows: Iterable[dict[str, Any]]) -> Path:
        return self._write_csv(self.TREND_FILE, TREND_COLUMNS, rows)

    def write_price_levels(self, rows: Iterable[dict[str, Any]]) -> Path:
        return self._write_csv(self.PRICE_LEVELS_FILE, PRICE_LEVEL_COLUMNS, rows)

    def write_weights(self, rows: Iterable[dict[str, Any]]) -> Path:
        return self._write_csv(self.WEIGHTS_FILE, WEIGHT_COLUMNS, rows)

    def write_assessments(self, rows: Iterable[dict[str, Any]]) -> Path:
        return self._write_csv(self.ASSESSMENTS_FILE, ASSESSMENT_COLUMNS, rows)
