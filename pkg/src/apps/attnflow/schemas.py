"""src/apps/attnflow/schemas.py."""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.apps.tracestore.schemas import TraceFlags
from src.core.enum import CueGroup, DecoderMixing, FlowMeasure, HeadMode

CATEGORY_ALIASES = {"✓": CueGroup.TRANSLATED, "✗": CueGroup.UNDER_TRANSLATED}


class CueLabel(BaseModel):
    """
    A source cue of one trace with its translation outcome.
    src_pos lists every subword position of the cue.
    """

    model_config = ConfigDict(frozen=True)

    pair_id: str
    src_pos: List[int] = Field(min_length=1)
    category: CueGroup

    @field_validator("src_pos", mode="before")
    @classmethod
    def parse_positions(cls, value):
        """Accepts 3, '3' or a subword range '3-4'."""
        if isinstance(value, int):
            return [value]
        if isinstance(value, str):
            lo, _, hi = value.strip().partition("-")
            return list(range(int(lo), int(hi or lo) + 1))
        return value

    @field_validator("category", mode="before")
    @classmethod
    def parse_category(cls, value):
        """Accepts the check and cross marks."""
        return CATEGORY_ALIASES.get(value, value)


class RawCueAttention(BaseModel):
    """Cross-attention mass on a cue per decoder position."""

    weights: List[float]
    max_weight: float


class FlowReportRow(BaseModel):
    """One (layer, group) cell of the flow table."""

    layer: int
    group: CueGroup
    n: int
    mean: float = Field(ge=0)
    min: float
    max: float
    abs_rho: Optional[float] = Field(default=None, ge=0, le=1)


class FlowReport(BaseModel):
    """Flow or raw-attention statistics per decoder layer."""

    measure: FlowMeasure
    head_mode: HeadMode
    decoder_mixing: DecoderMixing
    flags: TraceFlags
    rows: List[FlowReportRow]
    warnings: List[str] = []
