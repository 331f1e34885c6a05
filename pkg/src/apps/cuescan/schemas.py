"""src/apps/cuescan/schemas.py."""

from typing import Dict, List

from pydantic import BaseModel, Field, field_validator, model_validator

from src.core.enum import MatchMode, Quadrant, TextMode
from src.core.exceptions import ValidationFailedError

MISMATCH_CELLS = (Quadrant.EN_ONLY, Quadrant.ZH_ONLY)


class CueLexicon(BaseModel):
    """
    Negation cue list of one language.
    Word mode matches whole tokens, character mode any occurrence inside a token.
    """

    language: str
    entries: List[str] = Field(min_length=1)
    match_mode: MatchMode = MatchMode.WORD

    @field_validator("entries")
    @classmethod
    def strip_entries(cls, v: List[str]) -> List[str]:
        entries = [e.strip() for e in v]
        if not all(entries):
            raise ValueError("Lexicon entries must be non-empty")
        return entries

    @model_validator(mode="after")
    def lowercase_words(self) -> "CueLexicon":
        if self.match_mode == MatchMode.WORD:
            self.entries = [e.lower() for e in self.entries]
        return self


class QuadrantRow(BaseModel):
    """One report row of the cue-match table."""

    quadrant: Quadrant
    count: int
    ratio_pct: float


class MismatchTable(BaseModel):
    """
    Counts of the 2x2 table (source has cue x target has cue).
    Unreadable pairs are counted apart and never enter the cells.
    """

    counts: Dict[Quadrant, int] = Field(default_factory=lambda: {q: 0 for q in Quadrant})
    unreadable: int = 0
    text_mode: TextMode = TextMode.TOKENIZED

    @classmethod
    def from_counts(cls, both: int, en_only: int, zh_only: int, neither: int, **kwargs) -> "MismatchTable":
        """Table from published cell counts."""
        return cls(
            counts={Quadrant.BOTH: both, Quadrant.EN_ONLY: en_only, Quadrant.ZH_ONLY: zh_only, Quadrant.NEITHER: neither},
            **kwargs,
        )

    def add(self, quadrant: Quadrant) -> None:
        self.counts[quadrant] = self.counts.get(quadrant, 0) + 1

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def mismatches(self) -> int:
        return sum(self.counts.get(q, 0) for q in MISMATCH_CELLS)

    @property
    def mismatch_rate(self) -> float:
        """(en_only + zh_only) / total, 0 for an empty table."""
        return self.mismatches / self.total if self.total else 0.0

    def ratios(self) -> Dict[Quadrant, float]:
        total = self.total
        return {q: (self.counts.get(q, 0) / total if total else 0.0) for q in Quadrant}

    def merge(self, other: "MismatchTable") -> "MismatchTable":
        """Cell-wise sum; the text mode of both shards must agree."""
        if other.text_mode != self.text_mode:
            raise ValidationFailedError(f"Cannot merge {self.text_mode.value} and {other.text_mode.value} tables")
        return MismatchTable(
            counts={q: self.counts.get(q, 0) + other.counts.get(q, 0) for q in Quadrant},
            unreadable=self.unreadable + other.unreadable,
            text_mode=self.text_mode,
        )

    def rows(self) -> List[QuadrantRow]:
        """Report rows, ratios as percentages to one decimal."""
        ratios = self.ratios()
        return [
            QuadrantRow(quadrant=q, count=self.counts.get(q, 0), ratio_pct=round(100 * ratios[q], 1))
            for q in Quadrant
        ]


class TaggedPair(BaseModel):
    """A corpus line pair with its cue quadrant."""

    line_no: int
    src: str
    tgt: str
    quadrant: Quadrant
