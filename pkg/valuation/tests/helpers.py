"""Small builders shared by the test modules."""

import json
from pathlib import Path
from typing import Any, Optional, Sequence

from valuation.dataset import PropertyRecord


def make_record(
    index: int,
    features: Sequence[float],
    sale_price: Optional[float] = 100.0,
    sale_date: int = 0,
    prior_assessment: float = 100.0,
) -> PropertyRecord:
    return PropertyRecord(
        id=f"R{index:04d}",
        features=tuple(float(value) for value in features),
        sale_price=sale_price,
        sale_date=sale_date,
        prior_assessment=prior_assessment,
    )


def write_config(path: Path, document: dict[str, Any]) -> Path:
    path.write_text(json.dumps(document), encoding="utf-8")
    return path
