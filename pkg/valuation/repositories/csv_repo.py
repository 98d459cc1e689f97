"""CSV ingestion and export of assessment rolls."""

from __future__ import annotations

import logging
import math
import re
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from ..dataset.columns import ColumnSchema
from ..dataset.records import DatasetError, PropertyRecord

logger = logging.getLogger(__name__)

_YEAR_MONTH = re.compile(r"^(\d{4})-(\d{1,2})$")


class SchemaError(DatasetError):
    """Raised when a mapped column is missing from the file."""

    def __init__(self, column: str):
        super().__init__(f"Column {column!r} is missing from the CSV header")
        self.column = column


class RowParseError(DatasetError):
    """Raised when a cell cannot be parsed; ``row`` is the 0-based data row."""

    def __init__(self, row: int, column: str, detail: str):
        super().__init__(f"Row {row}, column {column!r}: {detail}")
        self.row = row
        self.column = column


def parse_period(text: str) -> int:
    """Parse an integer period or a ``YYYY-MM`` month into ``year * 12 + month - 1``."""
    value = text.strip()
    match = _YEAR_MONTH.match(value)
    if match:
        year, month = int(match.group(1)), int(match.group(2))
        if not 1 <= month <= 12:
            raise ValueError(f"month {month} out of range")
        return year * 12 + month - 1
    return int(value)


def _parse_float(cell: str, row: int, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise RowParseError(row, column, f"cannot parse {cell!r} as a number") from None
    if not math.isfinite(value):
        raise RowParseError(row, column, f"value {cell!r} is not finite")
    return value


def load_csv(path: str | Path, schema: Optional[ColumnSchema] = None) -> list[PropertyRecord]:
    schema = schema or ColumnSchema()
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"CSV file {path} does not exist")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise DatasetError(f"CSV file {path} is empty") from None

    header = [str(column) for column in frame.columns]
    feature_columns = schema.resolve_features(header)
    for column in [*schema.scalar_columns(), *feature_columns]:
        if column not in frame.columns:
            raise SchemaError(column)
    if not feature_columns:
        raise DatasetError(f"CSV file {path} has no feature columns")
    if frame.empty:
        raise DatasetError(f"CSV file {path} has a header but no rows")

    records = []
    for row, cells in enumerate(frame.itertuples(index=False, name=None)):
        values = dict(zip(header, cells))
        features = tuple(_parse_float(values[column], row, column) for column in feature_columns)
        price_cell = values[schema.sale_price].strip()
        sale_price = _parse_float(price_cell, row, schema.sale_price) if price_cell else None
        try:
            sale_date = parse_period(values[schema.sale_date])
        except ValueError as exc:
            raise RowParseError(row, schema.sale_date, str(exc)) from None
        prior = _parse_float(values[schema.prior_assessment], row, schema.prior_assessment)
        try:
            record = PropertyRecord(
                id=values[schema.id],
                features=features,
                sale_price=sale_price,
                sale_date=sale_date,
                prior_assessment=prior,
            )
        except DatasetError as exc:
            raise RowParseError(row, schema.prior_assessment if prior <= 0 else schema.sale_price, str(exc)) from None
        records.append(record)

    logger.info("Loaded %d records (%d features) from %s", len(records), len(feature_columns), path)
    return records


def write_csv(
    records: Sequence[PropertyRecord],
    path: str | Path,
    schema: Optional[ColumnSchema] = None,
    feature_columns: Optional[Sequence[str]] = None,
) -> Path:
    """Write records with the column mapping ``load_csv`` reads back."""
    schema = schema or ColumnSchema()
    if not records:
        raise DatasetError("Refusing to write an empty roll")
    feature_dim = len(records[0].features)
    names = list(feature_columns or schema.features or [f"x{j}" for j in range(feature_dim)])
    if len(names) != feature_dim:
        raise DatasetError(f"{len(names)} feature column names for {feature_dim} features")

    frame = pd.DataFrame(
        {
            schema.id: [record.id for record in records],
            **{name: [record.features[j] for record in records] for j, name in enumerate(names)},
            schema.sale_price: [record.sale_price for record in records],
            schema.sale_date: [record.sale_date for record in records],
            schema.prior_assessment: [record.prior_assessment for record in records],
        }
    )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, na_rep="", lineterminator="\n")
    logger.info("Wrote %d records to %s", len(records), path)
    return path
