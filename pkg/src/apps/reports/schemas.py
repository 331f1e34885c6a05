"""src/apps/reports/schemas.py."""

from pathlib import Path
from typing import Any, Dict, List, Sequence, Type

from pydantic import BaseModel, Field, model_validator

from src.core.enum import ReportFormat

SCHEMA_VERSION = 1


class RunConfig(BaseModel):
    """
    One command invocation: what ran, on which inputs, with which options.
    """

    command: str
    inputs: List[Path] = []
    lexicons: List[Path] = []
    options: Dict[str, Any] = {}
    seeds: List[int] = []
    output_dir: Path
    formats: List[ReportFormat] = [ReportFormat.CSV, ReportFormat.JSON]

    @property
    def referenced_paths(self) -> List[Path]:
        return [*self.inputs, *self.lexicons]


class ReportTable(BaseModel):
    """A named result table; every row carries every column."""

    name: str = Field(pattern=r"^[a-z0-9_]+$")
    columns: List[str] = Field(min_length=1)
    rows: List[Dict[str, Any]] = []

    @model_validator(mode="after")
    def validate_rows(self) -> "ReportTable":
        for i, row in enumerate(self.rows):
            missing = [c for c in self.columns if c not in row]
            if missing:
                raise ValueError(f"Row {i} of {self.name} lacks {', '.join(missing)}")
        return self

    @classmethod
    def from_models(cls, name: str, models: Sequence[BaseModel], model_type: Type[BaseModel]) -> "ReportTable":
        """Table whose columns are the fields of model_type."""
        columns = list(model_type.model_fields)
        rows = [m.model_dump(mode="json") for m in models]
        return cls(name=name, columns=columns, rows=[{c: r.get(c) for c in columns} for r in rows])


class Provenance(BaseModel):
    """Where the numbers came from."""

    toolkit_version: str
    input_digests: Dict[str, str] = {}
    seeds: List[int] = []


class Report(BaseModel):
    """Everything a command writes, minus timestamps."""

    schema_version: int = SCHEMA_VERSION
    command: str
    options: Dict[str, Any] = {}
    tables: List[ReportTable] = []
    provenance: Provenance
    warnings: List[str] = []
