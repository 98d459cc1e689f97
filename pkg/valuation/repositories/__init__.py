"""File-backed persistence: rolls, trained models and experiment reports."""

from .csv_repo import RowParseError, SchemaError, load_csv, parse_period, write_csv
from .model_store import (
    ModelStore,
    SerializationError,
    from_document,
    ksegment_from_document,
    ksegment_to_document,
    load_model,
    save_model,
    to_document,
)
from .report_repo import ReportRepository, ReportStoreError, round_significant

__all__ = [
    "SchemaError",
    "RowParseError",
    "load_csv",
    "write_csv",
    "parse_period",
    "ModelStore",
    "SerializationError",
    "to_document",
    "from_document",
    "ksegment_to_document",
    "ksegment_from_document",
    "save_model",
    "load_model",
    "ReportRepository",
    "ReportStoreError",
    "round_significant",
]
