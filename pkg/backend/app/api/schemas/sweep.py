# File: backend/app/api/schemas/sweep.py
# Purpose: Tabular result of a sweep, oracle run or position solve
from typing import Any, Literal, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

ResultKind = Literal["dissipation", "jitter", "sasa", "protocol", "oracle", "positions"]


class SweepResult(BaseModel):
    """Rows keyed by column name; ``columns`` fixes the output order"""
    model_config = ConfigDict(frozen=True)

    kind: ResultKind = Field(..., description="Which command produced the table")
    columns: list[str] = Field(..., min_length=1, description="Column order for CSV/JSON output")
    rows: list[dict[str, Any]] = Field(default_factory=list, description="One mapping per table row")
    summary: dict[str, Any] = Field(default_factory=dict, description="Scalars reported next to the table")
    seed: Optional[int] = Field(None, description="Seed of the random stream, when one was used")

    @model_validator(mode="after")
    def _rows_match_columns(self) -> "SweepResult":
        expected = set(self.columns)
        for index, row in enumerate(self.rows):
            if set(row) != expected:
                raise ValueError(f"row {index} has keys {sorted(row)}, expected {self.columns}")
        return self

    def column(self, name: str) -> list[Any]:
        return [row[name] for row in self.rows]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)

    @classmethod
    def concat(cls, results: list["SweepResult"]) -> "SweepResult":
        """Stack tables of the same kind and columns; summaries are merged in order."""
        if not results:
            raise ValueError("nothing to concatenate")
        first = results[0]
        summary: dict[str, Any] = {}
        rows: list[dict[str, Any]] = []
        for result in results:
            if result.kind != first.kind or result.columns != first.columns:
                raise ValueError(f"cannot stack {result.kind} {result.columns} onto {first.kind} {first.columns}")
            rows.extend(result.rows)
            summary.update(result.summary)
        return cls(kind=first.kind, columns=first.columns, rows=rows, summary=summary, seed=first.seed)
