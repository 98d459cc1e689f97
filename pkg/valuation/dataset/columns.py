"""Column mapping between roll files and ``PropertyRecord`` fields."""

from __future__ import annotations

from typing import Sequence

from pydantic import BaseModel, Field


class ColumnSchema(BaseModel):
    """Maps record fields to CSV header names.

    An empty ``features`` list means every column not mapped to another field,
    in file order.
    """

    id: str = "id"
    features: list[str] = Field(default_factory=list)
    sale_price: str = "sale_price"
    sale_date: str = "sale_date"
    prior_assessment: str = "prior_assessment"

    def scalar_columns(self) -> list[str]:
        return [self.id, self.sale_price, self.sale_date, self.prior_assessment]

    def resolve_features(self, header: Sequence[str]) -> list[str]:
        if self.features:
            return list(self.features)
        reserved = set(self.scalar_columns())
        return [column for column in header if column not in reserved]
